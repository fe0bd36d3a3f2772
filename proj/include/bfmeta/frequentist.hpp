#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfmeta/data.hpp"
#include "bfmeta/marginals.hpp"

namespace bfmeta {

struct QTestResult {
    double q = 0.0;
    int df = 0;
    double p = 1.0;  // chi-square upper tail
};

enum class Tau2Estimator { REML, DL };

struct ClassicalEstimate {
    ModelKind model = ModelKind::CE;
    double estimate = 0.0;
    double se = 0.0;
    double z = 0.0;
    double p = 1.0;  // two-sided
    std::optional<double> tau2;
    std::string estimator;  // "REML", "DL", "fixed" (RE only)
    std::vector<std::string> warnings;
};

// Throws TooFewStudies when k < 2.
QTestResult cochran_q(const Dataset& d);

ClassicalEstimate ce_estimate(const Dataset& d);

// tau^2 by REML (Fisher scoring, cap 200 iterations, tol 1e-10; falls back to
// DL with a warning) or DL. Throws TooFewStudies when k < 2.
ClassicalEstimate re_estimate(const Dataset& d, Tau2Estimator estimator = Tau2Estimator::REML);

// Inverse-variance estimate with weights 1 / (sigma_i^2 + tau2).
ClassicalEstimate re_estimate_fixed_tau2(const Dataset& d, double tau2);

double tau2_dersimonian_laird(const Dataset& d);
// Empty when the iteration does not converge.
std::optional<double> tau2_reml(const Dataset& d);

double two_sided_p(double z);

nlohmann::ordered_json to_json(const QTestResult& q);
nlohmann::ordered_json to_json(const ClassicalEstimate& e);

}  // namespace bfmeta
