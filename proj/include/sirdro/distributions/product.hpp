#pragma once

#include <utility>
#include <vector>

#include "sirdro/distributions/distribution1d.hpp"

namespace sirdro {

// Product of independent one-dimensional marginals. For simple integer
// recourse only the marginals matter, so this is the canonical joint law.
class ProductDistribution {
public:
    ProductDistribution() = default;
    explicit ProductDistribution(std::vector<Distribution1D> marginals)
        : marginals_(std::move(marginals)) {
        SIRDRO_REQUIRE(!marginals_.empty(), "product distribution: needs at least one marginal");
    }

    std::size_t dim() const { return marginals_.size(); }
    const Distribution1D& marginal(std::size_t i) const { return marginals_.at(i); }
    const std::vector<Distribution1D>& marginals() const { return marginals_; }

    bool all_discrete() const {
        for (const auto& m : marginals_)
            if (!m.is_discrete()) return false;
        return true;
    }

private:
    std::vector<Distribution1D> marginals_;
};

// Componentwise unit moving average; the m-dimensional transform acts on a
// product law marginal by marginal.
inline ProductDistribution product_gamma(const ProductDistribution& p) {
    std::vector<Distribution1D> out;
    out.reserve(p.dim());
    for (const auto& m : p.marginals()) out.push_back(gamma_transform(m));
    return ProductDistribution(std::move(out));
}

inline ProductDistribution product_gamma_alpha(const ProductDistribution& p,
                                               const std::vector<double>& alpha) {
    SIRDRO_REQUIRE(alpha.size() == p.dim(), "product_gamma_alpha: alpha dimension mismatch");
    std::vector<Distribution1D> out;
    out.reserve(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i)
        out.push_back(gamma_alpha_transform(p.marginal(i), alpha[i]));
    return ProductDistribution(std::move(out));
}

}  // namespace sirdro
