#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/distributions/distribution1d.hpp"

namespace sirdro {

// Finitely supported joint distribution on R^m, used by the transportation
// oracles and the separability checks.
struct JointDiscrete {
    struct Point {
        std::vector<double> s;
        double mass;
    };
    std::vector<Point> points;

    std::size_t dim() const { return points.empty() ? 0 : points.front().s.size(); }

    void validate() const {
        SIRDRO_REQUIRE(!points.empty(), "joint discrete: empty support");
        double total = 0.0;
        for (const auto& p : points) {
            SIRDRO_REQUIRE(p.mass > 0.0, "joint discrete: masses must be positive");
            SIRDRO_REQUIRE(p.s.size() == dim(), "joint discrete: inconsistent dimensions");
            total += p.mass;
        }
        SIRDRO_REQUIRE(std::abs(total - 1.0) <= 1e-10, "joint discrete: masses must sum to 1");
    }

    // Merge coincident support points.
    void dedup(double tol = 1e-12) {
        std::vector<Point> out;
        for (const auto& p : points) {
            bool merged = false;
            for (auto& q : out) {
                double d = 0.0;
                for (std::size_t i = 0; i < p.s.size(); ++i) d = std::max(d, std::abs(p.s[i] - q.s[i]));
                if (d <= tol) {
                    q.mass += p.mass;
                    merged = true;
                    break;
                }
            }
            if (!merged) out.push_back(p);
        }
        points = std::move(out);
    }

    Distribution1D project(std::size_t axis) const {
        std::vector<Atom> atoms;
        atoms.reserve(points.size());
        for (const auto& p : points) atoms.push_back({p.s.at(axis), p.mass});
        return Distribution1D::discrete(std::move(atoms));
    }
};

}  // namespace sirdro
