#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfmeta/data.hpp"
#include "bfmeta/marginals.hpp"
#include "bfmeta/priors.hpp"

namespace bfmeta {

struct EvidenceReport {
    ModelKind model = ModelKind::CE;
    double bf10 = 1.0;
    double log_bf10 = 0.0;
    double prior_odds = 1.0;
    double php_h1 = 0.5;
    std::optional<double> pr_tau2_pos;                 // marema
    std::optional<double> pr_re;                       // BMA
    std::optional<std::array<double, 4>> submodel_probs;  // BMA: (CE,H0), (CE,H1), (RE,H0), (RE,H1)
    double error_est = 0.0;                            // estimated relative error of bf10
    std::vector<double> study_bf10;                    // FE per-study factors
    std::string effect_prior;
    std::string het_prior;
    std::vector<std::string> notes;

    double bf01() const noexcept { return 1.0 / bf10; }
};

// B10 * odds / (1 + B10 * odds). Throws InvalidArgument unless both are positive.
double posterior_hypothesis_prob(double bf10, double prior_odds = 1.0);

EvidenceReport bf_ce(const Dataset& d, const EffectPrior& effect, double prior_odds = 1.0);
EvidenceReport bf_re(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het,
                     double prior_odds = 1.0);
EvidenceReport bf_marema(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het,
                         double prior_odds = 1.0);
EvidenceReport bf_bma(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het,
                      const std::array<double, 4>& weights = {0.25, 0.25, 0.25, 0.25}, double prior_odds = 1.0);
// Product of single-study CE Bayes factors.
EvidenceReport bf_fe_product(const Dataset& d, const EffectPrior& effect, double prior_odds = 1.0);
EvidenceReport bf_fe_product(const Dataset& d, const std::vector<EffectPrior>& study_priors, double prior_odds = 1.0);

// Dispatches on m.kind.
EvidenceReport evaluate(const Dataset& d, const ModelSpec& m, double prior_odds = 1.0,
                        const MarginalOptions& opt = {});

// log B10(y_j | y_1:j-1) for the CE model with a N(0, sigma0_sq) prior, from
// the conjugate posterior after j-1 studies used as the prior for study j.
std::vector<double> ce_conditional_log_factors(const Dataset& d, double sigma0_sq);

struct TrajectoryPoint {
    std::size_t j = 0;
    std::optional<double> bf10;  // empty below the model's minimum number of studies
    std::optional<double> log_bf10;
};

struct ThresholdCrossing {
    double threshold = 0.0;
    std::optional<std::size_t> first_j;  // first prefix with B10 >= threshold
};

struct EvidenceTrajectory {
    ModelKind model = ModelKind::CE;
    std::vector<TrajectoryPoint> points;
    std::vector<ThresholdCrossing> crossings;
};

inline const std::vector<double> kDefaultThresholds{10.0, 20.0, 100.0, 1000.0};

// Entry j is a from-scratch evaluation on the first j studies.
EvidenceTrajectory sequential_trajectory(const Dataset& d, const ModelSpec& m,
                                         const std::vector<double>& thresholds = kDefaultThresholds);

nlohmann::ordered_json to_json(const EvidenceReport& r);
nlohmann::ordered_json to_json(const EvidenceTrajectory& t);

// CSV `j,bf10,log_bf10`, NA for undefined prefixes.
void write_trajectory_csv(const EvidenceTrajectory& t, std::ostream& out);

// Kass-Raftery category of a Bayes factor, e.g. "strong evidence for H1".
std::string evidence_label(double bf10);

}  // namespace bfmeta
