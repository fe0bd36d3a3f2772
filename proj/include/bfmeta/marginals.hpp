#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bfmeta/data.hpp"
#include "bfmeta/priors.hpp"
#include "bfmeta/rng.hpp"

namespace bfmeta {

enum class ModelKind { CE, RE, FE, Marema, BMA };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model(std::string_view text);

struct ModelSpec {
    ModelKind kind = ModelKind::CE;
    EffectPrior effect_prior = EffectPrior::normal(0.0, 1.0);
    std::optional<HeterogeneityPrior> het_prior;  // RE, Marema, BMA
    // Prior probabilities of (CE,H0), (CE,H1), (RE,H0), (RE,H1).
    std::array<double, 4> bma_weights{0.25, 0.25, 0.25, 0.25};
    // FE only: one prior per study; empty means effect_prior for every study.
    std::vector<EffectPrior> fe_study_priors;
};

// Hypothesis target naturally tested by a model.
HypothesisTarget target_of(ModelKind kind) noexcept;

// Smallest k for which the model's marginal likelihoods are finite.
std::size_t min_studies(const ModelSpec& m);

// Throws InvalidModel / ImproperUnderBMA / TooFewStudies / InvalidPrior.
void check_spec(const Dataset& d, const ModelSpec& m);

// A log marginal likelihood. Under an improper heterogeneity prior the value
// is only defined up to the prior's arbitrary constant, which constant_class
// identifies.
struct LogMarginal {
    double value = 0.0;
    std::string constant_class = "none";
    double rel_error = 0.0;  // estimated relative error of exp(value)
};

// log(m_a / m_b). Throws ConstantMismatch unless the constant classes agree.
double log_ratio(const LogMarginal& a, const LogMarginal& b);

// sum_i log N(y_i | mu, sigma_i^2 + tau2). Throws NonPositiveVariance.
double loglik_given_params(const Dataset& d, double mu, double tau2);

// Conjugate CE posterior under a N(0, sigma0_sq) prior on theta.
struct PosteriorSummary {
    double m = 0.0;
    double v2 = 0.0;
};

PosteriorSummary analytic_ce_posterior(const Dataset& d, double sigma0_sq);

// Adds one study (y, sigma^2) to a conjugate posterior.
PosteriorSummary ce_update(const PosteriorSummary& post, double y, double var) noexcept;

struct BayesFactorPair {
    double bf01 = 1.0;
    double bf10 = 1.0;
    double log_bf01 = 0.0;
};

// B01 = (sigma0 / v_k) exp(-m_k^2 / (2 v_k^2)).
BayesFactorPair analytic_ce_bf01_normal(const Dataset& d, double sigma0_sq);

struct MarginalOptions {
    double rel_tol = 1e-9;          // outer tau^2 quadrature
    std::ostream* dump = nullptr;   // integrand samples as CSV `piece,u,tau2,log_integrand`
    std::string dump_prefix;        // prepended verbatim to every dumped row
};

// log of  integral prod_i N(y_i | mu, t_i) p(mu) dmu.  total_n is needed only
// by the unit-information prior (variance total_n / sum_i 1/t_i).
double log_mu_marginal(const Eigen::ArrayXd& y, const Eigen::ArrayXd& total_var, const EffectPrior& p,
                       std::optional<long long> total_n);

LogMarginal log_marginal(const Dataset& d, const ModelSpec& m, const Hypothesis& h, const MarginalOptions& opt = {});

// Marema marginal split at tau^2 = 0.
struct MaremaParts {
    LogMarginal total;
    double log_positive = 0.0;  // tau^2 > 0
    double log_negative = 0.0;  // -sigma2_min < tau^2 < 0
    double pr_positive() const;
};

MaremaParts marema_parts(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het,
                         const Hypothesis& h, const MarginalOptions& opt = {});

// Importance-sampling estimate of a marginal likelihood with heavy-tailed
// proposals built around a grid approximation of the posterior.
struct MonteCarloEstimate {
    double log_estimate = 0.0;
    double rel_se = 0.0;  // mc standard error / estimate (= se on the log scale)
    double ess = 0.0;
    std::size_t draws = 0;
};

// CE, RE, Marema and FE. Throws DegenerateWeights when ESS < 1% of draws.
MonteCarloEstimate mc_marginal_oracle(const Dataset& d, const ModelSpec& m, const Hypothesis& h, std::size_t draws,
                                      RngStream& rng);

// Posterior-to-prior ordinate ratio at effect = 0 under H1 (CE, RE, Marema).
// The posterior ordinate is the conditional ordinate given tau^2 averaged over
// the tau^2 posterior. Throws PriorNotIndependent for the unit-information
// prior on RE-type models.
double savage_dickey_bf01(const Dataset& d, const ModelSpec& m);

}  // namespace bfmeta
