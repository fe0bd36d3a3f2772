#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bfmeta/data.hpp"
#include "bfmeta/rng.hpp"

namespace bfmeta {

// ---------------------------------------------------------------------------
// Effect-size priors (on theta under CE/FE, on mu under RE/marema/BMA)
// ---------------------------------------------------------------------------

enum class EffectFamily { Normal, StudentT, Cauchy, Logistic, UnitInformation };

struct EffectPrior {
    EffectFamily family = EffectFamily::Normal;
    double location = 0.0;
    double scale = 1.0;  // sd for Normal
    double df = 0.0;     // StudentT only

    static EffectPrior normal(double mean, double sd) { return {EffectFamily::Normal, mean, sd, 0.0}; }
    static EffectPrior student_t(double location, double scale, double df) {
        return {EffectFamily::StudentT, location, scale, df};
    }
    static EffectPrior cauchy(double location, double scale) { return {EffectFamily::Cauchy, location, scale, 0.0}; }
    static EffectPrior logistic(double location, double scale) {
        return {EffectFamily::Logistic, location, scale, 0.0};
    }
    // N(0, N / sum_i 1/(sigma_i^2 + tau^2)); tau^2 = 0 under CE.
    static EffectPrior unit_information() { return {EffectFamily::UnitInformation, 0.0, 0.0, 0.0}; }

    bool is_gaussian() const noexcept {
        return family == EffectFamily::Normal || family == EffectFamily::UnitInformation;
    }
    bool depends_on_tau2() const noexcept { return family == EffectFamily::UnitInformation; }

    bool operator==(const EffectPrior&) const = default;
};

// Throws InvalidPrior on non-positive scale/df.
void validate(const EffectPrior& p);
std::string describe(const EffectPrior& p);
// Shorthand accepted back by parse_effect_prior, e.g. "t(0,2.35,13)".
std::string short_name(const EffectPrior& p);

// Scale defaults: SMD -> N(0,1), log odds -> t13(0, 2.35), Fisher z -> Logistic(0, 0.5).
EffectPrior default_effect_prior(Scale scale);

// Metadata defaults offered for selection but never mapped automatically.
EffectPrior cauchy_alternative_prior(Scale scale);

// Context required by the unit-information prior.
struct PriorContext {
    const Dataset* data = nullptr;
    double tau2 = 0.0;
};

// N / sum_i 1/(sigma_i^2 + tau2). Throws MissingSampleSizes when n is missing.
double unit_information_variance(const Dataset& d, double tau2);

double effect_prior_log_density(const EffectPrior& p, double x, std::optional<PriorContext> ctx = std::nullopt);
double effect_prior_density(const EffectPrior& p, double x, std::optional<PriorContext> ctx = std::nullopt);

// Plain distributional form with the unit-information prior resolved.
EffectPrior resolve(const EffectPrior& p, std::optional<PriorContext> ctx);

// Log density of a resolved prior with its normalizing constant precomputed;
// used in inner quadrature loops.
class EffectLogDensity {
public:
    explicit EffectLogDensity(const EffectPrior& p);
    double operator()(double x) const noexcept;
    const EffectPrior& prior() const noexcept { return p_; }

private:
    EffectPrior p_;
    double log_const_ = 0.0;
};

std::vector<double> sample_effect_prior(const EffectPrior& p, std::size_t count, RngStream& rng,
                                        std::optional<PriorContext> ctx = std::nullopt);

// ---------------------------------------------------------------------------
// Between-study heterogeneity priors
// ---------------------------------------------------------------------------

enum class HetFamily { UniformOnTau2, UniformOnTau, BergerDeely, InverseGammaOnTau };

// RE: tau^2 > 0.  Marema: tau^2 > -sigma2_min.
enum class Tau2Support { RE, Marema };

struct HeterogeneityPrior {
    HetFamily family = HetFamily::BergerDeely;
    double shape = 1.0;   // InverseGammaOnTau only
    double scale = 0.15;  // InverseGammaOnTau only

    static HeterogeneityPrior uniform_tau2() { return {HetFamily::UniformOnTau2, 0.0, 0.0}; }
    static HeterogeneityPrior uniform_tau() { return {HetFamily::UniformOnTau, 0.0, 0.0}; }
    static HeterogeneityPrior berger_deely() { return {HetFamily::BergerDeely, 0.0, 0.0}; }
    static HeterogeneityPrior inverse_gamma_tau(double shape, double scale) {
        return {HetFamily::InverseGammaOnTau, shape, scale};
    }

    bool proper() const noexcept { return family == HetFamily::InverseGammaOnTau; }

    // Fewest studies giving finite marginal likelihoods under this prior.
    std::size_t min_studies() const noexcept;

    // Identifies the arbitrary constant carried by an improper prior, "none" if proper.
    std::string constant_class(Tau2Support support) const;

    bool operator==(const HeterogeneityPrior&) const = default;
};

void validate(const HeterogeneityPrior& p);
std::string describe(const HeterogeneityPrior& p);
std::string short_name(const HeterogeneityPrior& p);

// Throws ImproperUnderBMA unless the prior is proper.
void require_proper(const HeterogeneityPrior& p);

// Unnormalized density p(tau^2) (normalized for the inverse-gamma prior on RE
// support). Throws OutsideSupport.
double heterogeneity_prior_density(const HeterogeneityPrior& p, double tau2, const Dataset& d, Tau2Support support);

// Kernel form used by the integrators: abs_tau2 = |tau^2| and total_var =
// sigma_i^2 + tau^2 are supplied separately so callers can form them without
// cancellation near the marema lower bound.
double heterogeneity_log_density(const HeterogeneityPrior& p, double abs_tau2, const Eigen::ArrayXd& total_var);

// Inverse-gamma density of tau itself.
double inverse_gamma_density(double x, double shape, double scale);

// ---------------------------------------------------------------------------
// Induced priors for transformed effect sizes
// ---------------------------------------------------------------------------

// Distribution on (0,1) for a success probability, or on (-1,1) after mapping
// u -> 2u - 1 for a correlation.
struct UnitIntervalPrior {
    enum class Kind { Beta, PointMass } kind = Kind::Beta;
    double a = 1.0;
    double b = 1.0;
    double point = 0.5;

    static UnitIntervalPrior uniform() { return {}; }
    static UnitIntervalPrior beta(double a, double b) { return {Kind::Beta, a, b, 0.5}; }
    static UnitIntervalPrior point_mass(double x) { return {Kind::PointMass, 1.0, 1.0, x}; }

    double draw(RngStream& rng) const;
};

struct PriorScaleContext {
    Scale scale = Scale::LogOdds;
    UnitIntervalPrior success1 = UnitIntervalPrior::uniform();
    UnitIntervalPrior success2 = UnitIntervalPrior::uniform();
    UnitIntervalPrior correlation = UnitIntervalPrior::uniform();  // mapped onto (-1, 1)
};

struct StudentTFit {
    double location = 0.0;
    double scale = 1.0;
    double df = 1.0;
    double log_likelihood = 0.0;
};

// theta = logit(p1) - logit(p2) for independent draws of p1, p2.
std::vector<double> sample_induced_logodds(const UnitIntervalPrior& p1, const UnitIntervalPrior& p2,
                                           std::size_t draws, RngStream& rng);

// Maximum-likelihood location/scale/df fit: EM for (location, scale) at fixed
// df, profiled over a log-spaced df grid and refined with Brent's method.
// Throws FitDiverged for degenerate samples.
StudentTFit fit_student_t(std::span<const double> x);

// Requires draws >= 1e5.
StudentTFit derive_induced_logodds_prior(const UnitIntervalPrior& p1, const UnitIntervalPrior& p2,
                                         std::size_t draws, RngStream& rng);

// eta = atanh(rho). Throws OutOfRange unless |rho| < 1.
double fisher_z(double rho);
double inverse_fisher_z(double eta);

std::vector<double> sample_induced_fisher_z(const UnitIntervalPrior& correlation, std::size_t draws, RngStream& rng);

}  // namespace bfmeta
