#pragma once

#include <cstddef>

#include "bfmeta/data.hpp"
#include "bfmeta/rng.hpp"

namespace bfmeta {

// k studies with sigma_i ~ U(sigma_lo, sigma_hi), theta_i ~ N(mu, tau^2)
// (theta_i = mu when tau = 0) and y_i ~ N(theta_i, sigma_i^2).
Dataset simulate_meta_dataset(std::size_t k, double mu, double tau, double sigma_lo, double sigma_hi,
                              RngStream& rng, Scale scale = Scale::SMD);

}  // namespace bfmeta
