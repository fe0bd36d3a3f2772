#include "bfmeta/generate.hpp"

#include <string>
#include <vector>

#include "bfmeta/error.hpp"

namespace bfmeta {

Dataset simulate_meta_dataset(std::size_t k, double mu, double tau, double sigma_lo, double sigma_hi,
                              RngStream& rng, Scale scale) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    if (!(sigma_lo > 0.0) || !(sigma_hi >= sigma_lo)) {
        throw Error(ErrorCode::InvalidArgument, "sigma range must satisfy 0 < low <= high");
    }
    if (!(tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be non-negative");
    std::vector<Study> rows(k);
    for (std::size_t i = 0; i < k; ++i) {
        auto& s = rows[i];
        s.id = "s" + std::to_string(i + 1);
        s.se = rng.uniform(sigma_lo, sigma_hi);
        const double theta = tau > 0.0 ? rng.normal(mu, tau) : mu;
        s.y = rng.normal(theta, s.se);
    }
    return validate_dataset(std::move(rows), scale);
}

}  // namespace bfmeta
