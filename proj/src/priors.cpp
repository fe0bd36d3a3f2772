#include "bfmeta/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "bfmeta/error.hpp"

namespace bfmeta {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

void validate(const EffectPrior& p) {
    if (p.family == EffectFamily::UnitInformation) return;
    if (!(p.scale > 0.0) || !std::isfinite(p.scale) || !std::isfinite(p.location)) {
        throw Error(ErrorCode::InvalidPrior, "effect prior scale must be positive and finite");
    }
    if (p.family == EffectFamily::StudentT && !(p.df > 0.0)) {
        throw Error(ErrorCode::InvalidPrior, "Student-t prior needs df > 0");
    }
}

std::string describe(const EffectPrior& p) {
    std::ostringstream os;
    switch (p.family) {
        case EffectFamily::Normal: os << "N(" << p.location << ", " << p.scale << "^2)"; break;
        case EffectFamily::StudentT: os << "t" << p.df << "(" << p.location << ", " << p.scale << ")"; break;
        case EffectFamily::Cauchy: os << "Cauchy(" << p.location << ", " << p.scale << ")"; break;
        case EffectFamily::Logistic: os << "Logistic(" << p.location << ", " << p.scale << ")"; break;
        case EffectFamily::UnitInformation: os << "unit-information"; break;
    }
    return os.str();
}

std::string short_name(const EffectPrior& p) {
    std::ostringstream os;
    switch (p.family) {
        case EffectFamily::Normal: os << "normal(" << p.location << "," << p.scale << ")"; break;
        case EffectFamily::StudentT: os << "t(" << p.location << "," << p.scale << "," << p.df << ")"; break;
        case EffectFamily::Cauchy: os << "cauchy(" << p.location << "," << p.scale << ")"; break;
        case EffectFamily::Logistic: os << "logistic(" << p.location << "," << p.scale << ")"; break;
        case EffectFamily::UnitInformation: os << "unit_information"; break;
    }
    return os.str();
}

EffectPrior default_effect_prior(Scale scale) {
    switch (scale) {
        case Scale::SMD: return EffectPrior::normal(0.0, 1.0);
        case Scale::LogOdds: return EffectPrior::student_t(0.0, 2.35, 13.0);
        case Scale::FisherZ: return EffectPrior::logistic(0.0, 0.5);
        case Scale::Other: break;
    }
    throw Error(ErrorCode::NoDefaultForScale, "no default effect prior for scale 'other'; specify one explicitly");
}

EffectPrior cauchy_alternative_prior(Scale scale) {
    switch (scale) {
        case Scale::SMD: return EffectPrior::cauchy(0.0, 0.707);
        case Scale::LogOdds: return EffectPrior::cauchy(0.0, 1.283);
        case Scale::FisherZ: return EffectPrior::cauchy(0.0, 0.354);
        case Scale::Other: break;
    }
    throw Error(ErrorCode::NoDefaultForScale, "no Cauchy default for scale 'other'");
}

double unit_information_variance(const Dataset& d, double tau2) {
    const auto n = d.total_n();
    if (!n) throw Error(ErrorCode::MissingSampleSizes, "the unit-information prior needs n for every study");
    const double info = (d.var() + tau2).inverse().sum();
    return static_cast<double>(*n) / info;
}

EffectPrior resolve(const EffectPrior& p, std::optional<PriorContext> ctx) {
    if (p.family != EffectFamily::UnitInformation) return p;
    if (!ctx || ctx->data == nullptr) {
        throw Error(ErrorCode::MissingContext, "the unit-information prior needs a dataset (and tau^2) context");
    }
    return EffectPrior::normal(0.0, std::sqrt(unit_information_variance(*ctx->data, ctx->tau2)));
}

EffectLogDensity::EffectLogDensity(const EffectPrior& p) : p_(p) {
    if (p.family == EffectFamily::UnitInformation) {
        throw Error(ErrorCode::MissingContext, "resolve the unit-information prior before evaluating it");
    }
    validate(p);
    switch (p.family) {
        case EffectFamily::Normal: log_const_ = -kLogSqrt2Pi - std::log(p.scale); break;
        case EffectFamily::StudentT:
            log_const_ = std::lgamma(0.5 * (p.df + 1.0)) - std::lgamma(0.5 * p.df) -
                         0.5 * std::log(p.df * std::numbers::pi) - std::log(p.scale);
            break;
        case EffectFamily::Cauchy: log_const_ = -std::log(std::numbers::pi * p.scale); break;
        case EffectFamily::Logistic: log_const_ = -std::log(p.scale); break;
        case EffectFamily::UnitInformation: break;
    }
}

double EffectLogDensity::operator()(double x) const noexcept {
    const double r = (x - p_.location) / p_.scale;
    switch (p_.family) {
        case EffectFamily::Normal: return log_const_ - 0.5 * r * r;
        case EffectFamily::StudentT: return log_const_ - 0.5 * (p_.df + 1.0) * std::log1p(r * r / p_.df);
        case EffectFamily::Cauchy: return log_const_ - std::log1p(r * r);
        case EffectFamily::Logistic: {
            // log[e^{-|r|} / (s (1 + e^{-|r|})^2)], symmetric form avoids overflow
            const double a = std::abs(r);
            return log_const_ - a - 2.0 * std::log1p(std::exp(-a));
        }
        case EffectFamily::UnitInformation: break;
    }
    return kNegInf;
}

double effect_prior_log_density(const EffectPrior& prior, double x, std::optional<PriorContext> ctx) {
    return EffectLogDensity(resolve(prior, ctx))(x);
}

double effect_prior_density(const EffectPrior& p, double x, std::optional<PriorContext> ctx) {
    return std::exp(effect_prior_log_density(p, x, ctx));
}

std::vector<double> sample_effect_prior(const EffectPrior& prior, std::size_t count, RngStream& rng,
                                        std::optional<PriorContext> ctx) {
    const EffectPrior p = resolve(prior, ctx);
    validate(p);
    std::vector<double> out(count);
    auto& eng = rng.engine();
    switch (p.family) {
        case EffectFamily::Normal: {
            std::normal_distribution<double> dist(p.location, p.scale);
            for (auto& v : out) v = dist(eng);
            break;
        }
        case EffectFamily::StudentT: {
            std::student_t_distribution<double> dist(p.df);
            for (auto& v : out) v = p.location + p.scale * dist(eng);
            break;
        }
        case EffectFamily::Cauchy: {
            std::cauchy_distribution<double> dist(p.location, p.scale);
            for (auto& v : out) v = dist(eng);
            break;
        }
        case EffectFamily::Logistic: {
            for (auto& v : out) {
                const double u = rng.uniform_open();
                v = p.location + p.scale * std::log(u / (1.0 - u));
            }
            break;
        }
        case EffectFamily::UnitInformation: break;
    }
    return out;
}

// ---------------------------------------------------------------------------

std::size_t HeterogeneityPrior::min_studies() const noexcept {
    switch (family) {
        case HetFamily::UniformOnTau2: return 3;
        case HetFamily::UniformOnTau: return 2;
        case HetFamily::BergerDeely: return 2;
        case HetFamily::InverseGammaOnTau: return 1;
    }
    return 1;
}

std::string HeterogeneityPrior::constant_class(Tau2Support support) const {
    if (proper()) return "none";
    const char* where = support == Tau2Support::RE ? "re" : "marema";
    return short_name(*this) + "@" + where;
}

void validate(const HeterogeneityPrior& p) {
    if (p.family == HetFamily::InverseGammaOnTau && !(p.shape > 0.0 && p.scale > 0.0)) {
        throw Error(ErrorCode::InvalidPrior, "inverse-gamma prior needs shape > 0 and scale > 0");
    }
}

std::string short_name(const HeterogeneityPrior& p) {
    switch (p.family) {
        case HetFamily::UniformOnTau2: return "uniform_tau2";
        case HetFamily::UniformOnTau: return "uniform_tau";
        case HetFamily::BergerDeely: return "berger_deely";
        case HetFamily::InverseGammaOnTau: {
            std::ostringstream os;
            os << "ig_tau(" << p.shape << "," << p.scale << ")";
            return os.str();
        }
    }
    return "unknown";
}

std::string describe(const HeterogeneityPrior& p) {
    switch (p.family) {
        case HetFamily::UniformOnTau2: return "uniform on tau^2 (improper)";
        case HetFamily::UniformOnTau: return "uniform on tau (improper)";
        case HetFamily::BergerDeely: return "Berger-Deely (improper)";
        case HetFamily::InverseGammaOnTau: {
            std::ostringstream os;
            os << "tau ~ IG(" << p.shape << ", " << p.scale << ")";
            return os.str();
        }
    }
    return "unknown";
}

void require_proper(const HeterogeneityPrior& p) {
    if (!p.proper()) {
        throw Error(ErrorCode::ImproperUnderBMA,
                    "model averaging over CE/RE needs a proper heterogeneity prior, got " + describe(p));
    }
}

double inverse_gamma_density(double x, double shape, double scale) {
    if (!(x > 0.0)) return 0.0;
    return std::exp(shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x);
}

double heterogeneity_log_density(const HeterogeneityPrior& p, double abs_tau2, const Eigen::ArrayXd& total_var) {
    switch (p.family) {
        case HetFamily::UniformOnTau2: return 0.0;
        case HetFamily::UniformOnTau: return -0.5 * std::log(abs_tau2);
        case HetFamily::BergerDeely:
            return -total_var.log().sum() / static_cast<double>(total_var.size());
        case HetFamily::InverseGammaOnTau: {
            if (!(abs_tau2 > 0.0)) return kNegInf;
            const double tau = std::sqrt(abs_tau2);
            // density of tau times |d tau / d tau^2| = 1 / (2 tau)
            return p.shape * std::log(p.scale) - std::lgamma(p.shape) - (p.shape + 1.0) * std::log(tau) -
                   p.scale / tau - std::log(2.0 * tau);
        }
    }
    return kNegInf;
}

double heterogeneity_prior_density(const HeterogeneityPrior& p, double tau2, const Dataset& d, Tau2Support support) {
    validate(p);
    const double lower = support == Tau2Support::RE ? 0.0 : -d.sigma2_min();
    if (!(tau2 > lower) && !(support == Tau2Support::RE && tau2 == 0.0)) {
        throw Error(ErrorCode::OutsideSupport, "tau^2 outside the declared support");
    }
    const Eigen::ArrayXd total = d.var() + tau2;
    return std::exp(heterogeneity_log_density(p, std::abs(tau2), total));
}

// ---------------------------------------------------------------------------

double UnitIntervalPrior::draw(RngStream& rng) const {
    if (kind == Kind::PointMass) return point;
    if (a == 1.0 && b == 1.0) return rng.uniform_open();
    std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
    const double x = ga(rng.engine());
    const double y = gb(rng.engine());
    return x / (x + y);
}

std::vector<double> sample_induced_logodds(const UnitIntervalPrior& p1, const UnitIntervalPrior& p2,
                                           std::size_t draws, RngStream& rng) {
    std::vector<double> out(draws);
    auto logit = [](double p) { return std::log(p) - std::log1p(-p); };
    for (auto& v : out) {
        const double a = p1.draw(rng);
        const double b = p2.draw(rng);
        v = logit(a) - logit(b);
    }
    return out;
}

namespace {

struct LocScale {
    double location;
    double scale;
};

double t_loglik(std::span<const double> x, double loc, double scale, double df) {
    const double c = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi) -
                     std::log(scale);
    double s = 0.0;
    for (double xi : x) {
        const double r = (xi - loc) / scale;
        s += std::log1p(r * r / df);
    }
    return static_cast<double>(x.size()) * c - 0.5 * (df + 1.0) * s;
}

// EM iterations for location and scale at fixed df.
LocScale t_em(std::span<const double> x, double df, LocScale start) {
    LocScale cur = start;
    const double n = static_cast<double>(x.size());
    for (int iter = 0; iter < 500; ++iter) {
        double sw = 0.0, swx = 0.0;
        for (double xi : x) {
            const double r = (xi - cur.location) / cur.scale;
            const double w = (df + 1.0) / (df + r * r);
            sw += w;
            swx += w * xi;
        }
        const double loc = swx / sw;
        double ss = 0.0;
        for (double xi : x) {
            const double r = (xi - cur.location) / cur.scale;
            const double w = (df + 1.0) / (df + r * r);
            ss += w * (xi - loc) * (xi - loc);
        }
        const double scale = std::sqrt(ss / n);
        const bool done = std::abs(loc - cur.location) < 1e-10 * (1.0 + std::abs(loc)) &&
                          std::abs(scale - cur.scale) < 1e-10 * scale;
        cur = {loc, scale};
        if (!(scale > 0.0) || !std::isfinite(scale)) break;
        if (done) break;
    }
    return cur;
}

}  // namespace

StudentTFit fit_student_t(std::span<const double> x) {
    if (x.size() < 3) throw Error(ErrorCode::FitDiverged, "too few samples for a t fit");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::vector<double> dev(sorted.size());
    std::transform(sorted.begin(), sorted.end(), dev.begin(), [&](double v) { return std::abs(v - median); });
    std::nth_element(dev.begin(), dev.begin() + static_cast<std::ptrdiff_t>(dev.size() / 2), dev.end());
    const double mad = 1.4826 * dev[dev.size() / 2];
    if (!(mad > 0.0) || !std::isfinite(mad)) {
        throw Error(ErrorCode::FitDiverged, "samples are degenerate (zero spread)");
    }

    LocScale warm{median, mad};
    auto profile = [&](double log_df) {
        const double df = std::exp(log_df);
        warm = t_em(x, df, warm);
        if (!(warm.scale > 0.0) || !std::isfinite(warm.scale)) return std::numeric_limits<double>::infinity();
        return -t_loglik(x, warm.location, warm.scale, df);
    };

    const double lo = std::log(0.3), hi = std::log(1000.0);
    constexpr int grid = 36;
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < grid; ++i) {
        const double g = lo + (hi - lo) * i / (grid - 1);
        const double v = profile(g);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    const double step = (hi - lo) / (grid - 1);
    const double a = lo + step * std::max(0, best_i - 1);
    const double b = lo + step * std::min(grid - 1, best_i + 1);
    warm = {median, mad};
    auto [log_df, nll] = boost::math::tools::brent_find_minima(profile, a, b, 40);
    const double df = std::exp(log_df);
    const LocScale fit = t_em(x, df, LocScale{median, mad});
    if (!(fit.scale > 0.0) || !std::isfinite(fit.scale) || !std::isfinite(nll)) {
        throw Error(ErrorCode::FitDiverged, "t fit did not converge");
    }
    return {fit.location, fit.scale, df, t_loglik(x, fit.location, fit.scale, df)};
}

StudentTFit derive_induced_logodds_prior(const UnitIntervalPrior& p1, const UnitIntervalPrior& p2,
                                         std::size_t draws, RngStream& rng) {
    if (draws < 100000) throw Error(ErrorCode::InvalidArgument, "need at least 1e5 draws");
    const auto samples = sample_induced_logodds(p1, p2, draws, rng);
    return fit_student_t(samples);
}

double fisher_z(double rho) {
    if (!(std::abs(rho) < 1.0)) throw Error(ErrorCode::OutOfRange, "correlation must lie in (-1, 1)");
    return std::atanh(rho);
}

double inverse_fisher_z(double eta) { return std::tanh(eta); }

std::vector<double> sample_induced_fisher_z(const UnitIntervalPrior& correlation, std::size_t draws, RngStream& rng) {
    std::vector<double> out(draws);
    for (auto& v : out) {
        double rho;
        do { rho = 2.0 * correlation.draw(rng) - 1.0; } while (!(std::abs(rho) < 1.0));
        v = std::atanh(rho);
    }
    return out;
}

}  // namespace bfmeta
