// Compares the transport-based and variation-based error bounds for the
// cell-averaging convex approximation across three distribution families.

#include <cstdio>

#include "sirdro/bounds/bounds.hpp"
#include "sirdro/bounds/families.hpp"

using namespace sirdro;

int main() {
    CostVector q = CostVector::one_dim(1.0, 0.0);
    std::printf("%-22s %10s %12s %12s\n", "distribution", "W1", "bound(W1)", "bound(TV)");

    auto report = [&](const char* name, const Distribution1D& d) {
        BoundReport rep =
            error_bound_convex_approx(q, ProductDistribution({d}), ConvexApprox::kAlpha, {0.0});
        std::printf("%-22s %10.5f %12.5f %12.5f\n", name, rep.wasserstein_distance,
                    rep.bound_wasserstein, *rep.bound_tv);
    };

    report("uniform(0,1)", Distribution1D::uniform(0.0, 1.0));
    report("standard normal", make_truncated_normal());
    for (int n : {1, 3, 6, 9}) {
        char name[32];
        std::snprintf(name, sizeof(name), "dyadic level %d", n);
        report(name, make_dyadic_uniform(n));
    }
    std::printf("\nthe cell-uniform law is exact for the approximation (W1 bound 0);\n");
    std::printf("deep dyadic levels defeat the variation bound but not the transport bound\n");
    return 0;
}
