#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sirdro {

// Thread cap: min(hardware, SIR_DRO_THREADS when set). At most one thread per task.
inline unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SIR_DRO_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

// Index-sharded parallel loop; results must be written to per-index slots so
// output stays deterministic regardless of the thread count.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    unsigned workers = std::min<std::size_t>(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace sirdro
