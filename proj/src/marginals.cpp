#include "bfmeta/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bfmeta/error.hpp"
#include "bfmeta/quadrature.hpp"

namespace bfmeta {

namespace {

constexpr double kLog2Pi = 1.83787706640934548356;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

// The likelihood prod_i N(y_i | mu, t_i) as a function of mu equals
// exp(log_c) * exp(-(mu - mu_hat)^2 / (2 v)).
struct GaussWindow {
    double mu_hat;
    double v;
    double log_c;
};

GaussWindow gauss_window(const Eigen::ArrayXd& y, const Eigen::ArrayXd& t) {
    const Eigen::ArrayXd w = t.inverse();
    const double big_w = w.sum();
    // centred on y[0] so that tied effects give an exactly zero residual
    const double mu_hat = y(0) + (w * (y - y(0))).sum() / big_w;
    const double log_c = -0.5 * (kLog2Pi * static_cast<double>(t.size()) + t.log().sum()) -
                         0.5 * (w * (y - mu_hat).square()).sum();
    return {mu_hat, 1.0 / big_w, log_c};
}

double log_null_likelihood(const Eigen::ArrayXd& y, const Eigen::ArrayXd& t) {
    return -0.5 * (kLog2Pi * static_cast<double>(t.size()) + t.log().sum() + (y.square() / t).sum());
}

// log E[p(mu)] for mu ~ N(m, v), p a resolved effect prior.
double log_expected_prior(const EffectPrior& p, double m, double v) {
    if (p.family == EffectFamily::Normal) return log_normal_pdf(m, p.location, v + p.scale * p.scale);
    const EffectLogDensity logp(p);
    const double sd = std::sqrt(v);
    // Limits where one factor is effectively a point mass against the other.
    if (sd < 1e-7 * p.scale) return logp(m);
    if (p.scale < 1e-7 * sd) return log_normal_pdf(p.location, m, v);

    const double lo = std::min(m - 12.0 * sd, p.location - 30.0 * p.scale);
    const double hi = std::max(m + 12.0 * sd, p.location + 30.0 * p.scale);
    std::vector<double> pts{lo, hi, m, p.location};
    for (double j : {1.0, 10.0}) {
        pts.push_back(p.location - j * p.scale);
        pts.push_back(p.location + j * p.scale);
    }
    for (double j : {1.0, 3.0}) {
        pts.push_back(m - j * sd);
        pts.push_back(m + j * sd);
    }
    for (auto& x : pts) x = std::clamp(x, lo, hi);
    auto logf = [&](double x) {
        const double z = (x - m) / sd;
        return -0.5 * z * z + logp(x);
    };
    double ref = kNegInf;
    for (double x : pts) ref = std::max(ref, logf(x));
    const auto r = quad::integrate([&](double x) { return std::exp(logf(x) - ref); }, pts, {1e-11, 0.0, 2000});
    if (!(r.value > 0.0)) return kNegInf;
    if (!r.converged && r.abs_error > 1e-7 * r.value) {
        throw Error(ErrorCode::QuadratureNotConverged,
                    "inner effect integral reached relative error " + fmt(r.abs_error / r.value));
    }
    return ref + std::log(r.value) - 0.5 * (kLog2Pi + std::log(v));
}

EffectPrior resolve_with_variance(const EffectPrior& p, double v, std::optional<long long> total_n) {
    if (p.family != EffectFamily::UnitInformation) return p;
    if (!total_n) throw Error(ErrorCode::MissingSampleSizes, "the unit-information prior needs n for every study");
    return EffectPrior::normal(0.0, std::sqrt(static_cast<double>(*total_n) * v));
}

struct AxisResult {
    double log_value = kNegInf;
    double rel_error = 0.0;
};

// Integrates exp(h(u)) over (lo, hi). Infinite ends are truncated once the
// integrand has stayed 45 log units below its running maximum; an integrand
// that keeps growing or never falls off is reported as NonFiniteMarginal.
template <class H>
AxisResult integrate_log_axis(H&& h_raw, double lo, double hi, double center, double rel_tol) {
    constexpr double step = 0.5, span = 40.0, drop = 45.0, walk = 2.0, limit = 700.0;
    auto h = [&](double u) {
        const double v = h_raw(u);
        return std::isnan(v) ? kNegInf : v;
    };
    std::vector<std::pair<double, double>> samples;
    const double a = std::max(lo, center - span);
    const double b = std::min(hi, center + span);
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
    double ref = kNegInf;
    for (int i = 0; i <= n; ++i) {
        const double u = a + (b - a) * i / n;
        const double v = h(u);
        samples.emplace_back(u, v);
        ref = std::max(ref, v);
    }
    auto extend = [&](double from, double bound, double dir, const char* where) {
        double u = from;
        int below = 0;
        while (dir < 0 ? u > bound : u < bound) {
            u = dir < 0 ? std::max(bound, u - walk) : std::min(bound, u + walk);
            if (std::abs(u) > limit) {
                throw Error(ErrorCode::NonFiniteMarginal,
                            std::string("integrand does not decay as tau^2 approaches ") + where);
            }
            const double v = h(u);
            samples.emplace_back(u, v);
            ref = std::max(ref, v);
            below = v < ref - drop ? below + 1 : 0;
            if (below >= 2) break;
        }
    };
    extend(a, lo, -1.0, "the lower end of its support");
    extend(b, hi, +1.0, "infinity");
    if (ref == kNegInf) return {};
    if (ref == std::numeric_limits<double>::infinity()) {
        throw Error(ErrorCode::NonFiniteMarginal, "integrand is unbounded");
    }

    std::sort(samples.begin(), samples.end());
    std::size_t i0 = 0, i1 = samples.size() - 1;
    while (i0 < samples.size() && samples[i0].second < ref - drop - 5.0) ++i0;
    while (i1 > 0 && samples[i1].second < ref - drop - 5.0) --i1;
    i0 = i0 > 0 ? i0 - 1 : 0;
    i1 = std::min(samples.size() - 1, i1 + 1);
    const double ulo = samples[i0].first, uhi = samples[i1].first;
    double umax = ulo;
    for (const auto& [u, v] : samples) {
        if (v == ref) umax = u;
    }
    std::vector<double> pts{ulo, uhi, std::clamp(umax, ulo, uhi)};
    for (double u = ulo + 2.0; u < uhi; u += 2.0) pts.push_back(u);

    const auto r = quad::integrate([&](double u) { return std::exp(h(u) - ref); }, pts, {rel_tol, 0.0, 4000});
    if (!(r.value > 0.0)) return {};
    const double rel = r.abs_error / r.value;
    if (!r.converged && rel > 1e-6) {
        throw Error(ErrorCode::QuadratureNotConverged, "tau^2 integral reached relative error " + fmt(rel));
    }
    return {ref + std::log(r.value), rel};
}

// Log integrand pieces on the transformed tau^2 axis, log of
// p(tau^2) * p(y | tau^2, H) * d tau^2 / du.
class TauIntegrand {
public:
    TauIntegrand(const Dataset& d, const HeterogeneityPrior& het, const EffectPrior& effect, bool null)
        : d_(d), het_(het), effect_(effect), null_(null) {}

    double inner(const Eigen::ArrayXd& t) const {
        return null_ ? log_null_likelihood(d_.y(), t) : log_mu_marginal(d_.y(), t, effect_, d_.total_n());
    }

    // tau^2 = e^u
    double positive(double u) const {
        const double tau2 = std::exp(u);
        const Eigen::ArrayXd t = d_.var() + tau2;
        return u + heterogeneity_log_density(het_, tau2, t) + inner(t);
    }
    // tau^2 = -sigma2_min + e^u, total variance formed without cancellation
    double near_bound(double u) const {
        const double s = std::exp(u);
        const Eigen::ArrayXd t = (d_.var() - d_.sigma2_min()) + s;
        return u + heterogeneity_log_density(het_, d_.sigma2_min() - s, t) + inner(t);
    }
    // tau^2 = -e^u
    double below_zero(double u) const {
        const double a = std::exp(u);
        const Eigen::ArrayXd t = d_.var() - a;
        return u + heterogeneity_log_density(het_, a, t) + inner(t);
    }

private:
    const Dataset& d_;
    const HeterogeneityPrior& het_;
    const EffectPrior& effect_;
    bool null_;
};

double log_median_var(const Dataset& d) {
    std::vector<double> v(d.var().begin(), d.var().end());
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return std::log(v[v.size() / 2]);
}

template <class F>
auto dumped(F f, const MarginalOptions& opt, const char* piece, double (*tau2_of)(double, double),
            double sigma2_min) {
    return [=, out = opt.dump, prefix = opt.dump_prefix](double u) {
        const double v = f(u);
        if (out) *out << prefix << piece << ',' << format_double(u) << ',' << format_double(tau2_of(u, sigma2_min)) << ','
                      << format_double(v) << '\n';
        return v;
    };
}

double tau2_positive(double u, double) { return std::exp(u); }
double tau2_near_bound(double u, double s2) { return -s2 + std::exp(u); }
double tau2_below_zero(double u, double) { return -std::exp(u); }

AxisResult re_integral(const Dataset& d, const HeterogeneityPrior& het, const EffectPrior& effect, bool null,
                       const MarginalOptions& opt) {
    const TauIntegrand f(d, het, effect, null);
    const double inf = std::numeric_limits<double>::infinity();
    auto h = dumped([&](double u) { return f.positive(u); }, opt, "positive", tau2_positive, d.sigma2_min());
    return integrate_log_axis(h, -inf, inf, log_median_var(d), opt.rel_tol);
}

bool is_null(const Hypothesis& h) { return h.kind == HypothesisKind::NullZero; }

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::CE: return "CE";
        case ModelKind::RE: return "RE";
        case ModelKind::FE: return "FE";
        case ModelKind::Marema: return "marema";
        case ModelKind::BMA: return "BMA";
    }
    return "CE";
}

ModelKind parse_model(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "ce") return ModelKind::CE;
    if (s == "re") return ModelKind::RE;
    if (s == "fe") return ModelKind::FE;
    if (s == "marema") return ModelKind::Marema;
    if (s == "bma") return ModelKind::BMA;
    throw Error(ErrorCode::ConfigParse, "unknown model '" + std::string(text) + "'");
}

HypothesisTarget target_of(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::CE: return HypothesisTarget::CommonEffect;
        case ModelKind::FE: return HypothesisTarget::AllStudyEffects;
        default: return HypothesisTarget::GlobalMean;
    }
}

std::size_t min_studies(const ModelSpec& m) {
    switch (m.kind) {
        case ModelKind::CE:
        case ModelKind::FE: return 1;
        default: return m.het_prior ? m.het_prior->min_studies() : 1;
    }
}

void check_spec(const Dataset& d, const ModelSpec& m) {
    if (m.effect_prior.family == EffectFamily::UnitInformation) {
        if (d.missing_sample_sizes()) {
            throw Error(ErrorCode::MissingSampleSizes, "the unit-information prior needs n for every study");
        }
    } else {
        validate(m.effect_prior);
    }
    if (m.kind == ModelKind::FE) {
        if (!m.fe_study_priors.empty() && m.fe_study_priors.size() != d.k()) {
            throw Error(ErrorCode::InvalidModel, "FE needs exactly one prior per study");
        }
        for (const auto& p : m.fe_study_priors) {
            if (p.family != EffectFamily::UnitInformation) validate(p);
        }
    }
    if (m.kind == ModelKind::RE || m.kind == ModelKind::Marema || m.kind == ModelKind::BMA) {
        if (!m.het_prior) {
            throw Error(ErrorCode::InvalidModel, std::string(to_string(m.kind)) + " needs a heterogeneity prior");
        }
        validate(*m.het_prior);
    }
    if (m.kind == ModelKind::BMA) {
        require_proper(*m.het_prior);
        double sum = 0.0;
        for (double w : m.bma_weights) {
            if (!(w >= 0.0)) throw Error(ErrorCode::InvalidModel, "BMA weights must be non-negative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidModel, "BMA weights must sum to 1");
        if (m.bma_weights[0] + m.bma_weights[2] <= 0.0 || m.bma_weights[1] + m.bma_weights[3] <= 0.0) {
            throw Error(ErrorCode::InvalidModel, "BMA weights put no mass on one of the hypotheses");
        }
    }
    const std::size_t need = min_studies(m);
    if (d.k() < need) {
        throw Error(ErrorCode::NonFiniteMarginal, std::string(to_string(m.kind)) + " with " +
                                                      describe(*m.het_prior) + " needs at least " +
                                                      std::to_string(need) + " studies, got " +
                                                      std::to_string(d.k()));
    }
}

double log_ratio(const LogMarginal& a, const LogMarginal& b) {
    if (a.constant_class != b.constant_class) {
        throw Error(ErrorCode::ConstantMismatch,
                    "cannot compare marginals carrying different arbitrary constants (" + a.constant_class + " vs " +
                        b.constant_class + ")");
    }
    return a.value - b.value;
}

double loglik_given_params(const Dataset& d, double mu, double tau2) {
    const Eigen::ArrayXd t = d.var() + tau2;
    if (!(t > 0.0).all()) throw Error(ErrorCode::NonPositiveVariance, "sigma_i^2 + tau^2 must be positive");
    return -0.5 * (kLog2Pi * static_cast<double>(d.k()) + t.log().sum() + ((d.y() - mu).square() / t).sum());
}

PosteriorSummary analytic_ce_posterior(const Dataset& d, double sigma0_sq) {
    const Eigen::ArrayXd w = d.var().inverse();
    const double prec = 1.0 / sigma0_sq + w.sum();
    return {(w * d.y()).sum() / prec, 1.0 / prec};
}

PosteriorSummary ce_update(const PosteriorSummary& post, double y, double var) noexcept {
    const double prec = 1.0 / post.v2 + 1.0 / var;
    return {(post.m / post.v2 + y / var) / prec, 1.0 / prec};
}

BayesFactorPair analytic_ce_bf01_normal(const Dataset& d, double sigma0_sq) {
    const auto post = analytic_ce_posterior(d, sigma0_sq);
    const double log_bf01 = 0.5 * std::log(sigma0_sq / post.v2) - post.m * post.m / (2.0 * post.v2);
    return {std::exp(log_bf01), std::exp(-log_bf01), log_bf01};
}

double log_mu_marginal(const Eigen::ArrayXd& y, const Eigen::ArrayXd& total_var, const EffectPrior& p,
                       std::optional<long long> total_n) {
    const auto g = gauss_window(y, total_var);
    const EffectPrior r = resolve_with_variance(p, g.v, total_n);
    return g.log_c + 0.5 * (kLog2Pi + std::log(g.v)) + log_expected_prior(r, g.mu_hat, g.v);
}

double MaremaParts::pr_positive() const { return std::exp(log_positive - total.value); }

MaremaParts marema_parts(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het,
                         const Hypothesis& h, const MarginalOptions& opt) {
    const TauIntegrand f(d, het, effect, is_null(h));
    const double inf = std::numeric_limits<double>::infinity();
    const double s2 = d.sigma2_min();
    const double split = std::log(0.5 * s2);

    const auto pos = re_integral(d, het, effect, is_null(h), opt);
    auto h_low = dumped([&](double u) { return f.near_bound(u); }, opt, "near_bound", tau2_near_bound, s2);
    auto h_mid = dumped([&](double u) { return f.below_zero(u); }, opt, "below_zero", tau2_below_zero, s2);
    const auto low = integrate_log_axis(h_low, -inf, split, split, opt.rel_tol);
    const auto mid = integrate_log_axis(h_mid, -inf, split, split, opt.rel_tol);

    MaremaParts out;
    out.log_positive = pos.log_value;
    out.log_negative = log_sum_exp(low.log_value, mid.log_value);
    out.total.value = log_sum_exp(out.log_positive, out.log_negative);
    out.total.constant_class = het.constant_class(Tau2Support::Marema);
    double err = 0.0;
    for (const auto* part : {&pos, &low, &mid}) {
        if (part->log_value > kNegInf) err += part->rel_error * std::exp(part->log_value - out.total.value);
    }
    out.total.rel_error = err;
    if (!std::isfinite(out.total.value)) {
        throw Error(ErrorCode::NonFiniteMarginal, "marema marginal likelihood underflowed");
    }
    return out;
}

LogMarginal log_marginal(const Dataset& d, const ModelSpec& m, const Hypothesis& h, const MarginalOptions& opt) {
    check_spec(d, m);
    if (h.target == HypothesisTarget::AllStudyEffects && m.kind != ModelKind::FE) {
        throw Error(ErrorCode::InvalidModel, "the all-study-effects hypothesis belongs to the FE model");
    }
    const bool null = is_null(h);
    LogMarginal out;
    switch (m.kind) {
        case ModelKind::CE:
            out.value = null ? log_null_likelihood(d.y(), d.var())
                             : log_mu_marginal(d.y(), d.var(), m.effect_prior, d.total_n());
            break;
        case ModelKind::FE:
            if (null) {
                out.value = log_null_likelihood(d.y(), d.var());
            } else {
                double sum = 0.0;
                for (std::size_t i = 0; i < d.k(); ++i) {
                    const auto& prior = m.fe_study_priors.empty() ? m.effect_prior : m.fe_study_priors[i];
                    const Eigen::ArrayXd yi = Eigen::ArrayXd::Constant(1, d[i].y);
                    const Eigen::ArrayXd vi = Eigen::ArrayXd::Constant(1, d[i].se * d[i].se);
                    std::optional<long long> ni;
                    if (d[i].n) ni = *d[i].n;
                    sum += log_mu_marginal(yi, vi, prior, ni);
                }
                out.value = sum;
            }
            break;
        case ModelKind::RE: {
            const auto r = re_integral(d, *m.het_prior, m.effect_prior, null, opt);
            out.value = r.log_value;
            out.rel_error = r.rel_error;
            out.constant_class = m.het_prior->constant_class(Tau2Support::RE);
            break;
        }
        case ModelKind::Marema: return marema_parts(d, m.effect_prior, *m.het_prior, h, opt).total;
        case ModelKind::BMA: {
            const double w_ce = null ? m.bma_weights[0] : m.bma_weights[1];
            const double w_re = null ? m.bma_weights[2] : m.bma_weights[3];
            ModelSpec sub = m;
            double acc = kNegInf;
            if (w_ce > 0.0) {
                sub.kind = ModelKind::CE;
                acc = log_sum_exp(acc, std::log(w_ce) + log_marginal(d, sub, h, opt).value);
            }
            if (w_re > 0.0) {
                sub.kind = ModelKind::RE;
                const auto re = log_marginal(d, sub, h, opt);
                acc = log_sum_exp(acc, std::log(w_re) + re.value);
                out.rel_error = re.rel_error;
            }
            out.value = acc - std::log(w_ce + w_re);
            break;
        }
    }
    if (!std::isfinite(out.value)) throw Error(ErrorCode::NonFiniteMarginal, "marginal likelihood is not finite");
    return out;
}

// ---------------------------------------------------------------------------
// Importance-sampling oracle

namespace {

double t4_logpdf(double x, double loc, double scale) {
    // lgamma(2.5) - lgamma(2) - 0.5 log(4 pi)
    constexpr double c = -0.98082925301172619;
    const double r = (x - loc) / scale;
    return c - std::log(scale) - 2.5 * std::log1p(r * r / 4.0);
}

struct Proposal1D {
    double loc = 0.0;
    double scale = 1.0;
};

// Mean and sd of a density known up to a constant through its log on a grid.
Proposal1D grid_moments(const std::vector<double>& x, const std::vector<double>& logf) {
    const double ref = *std::max_element(logf.begin(), logf.end());
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = std::exp(logf[i] - ref);
        s0 += w;
        s1 += w * x[i];
        s2 += w * x[i] * x[i];
    }
    const double mean = s1 / s0;
    const double var = std::max(s2 / s0 - mean * mean, 1e-8);
    return {mean, std::sqrt(var)};
}

// Approximate spread of a resolved effect prior, used only to shape proposals.
double prior_spread(const EffectPrior& p) {
    switch (p.family) {
        case EffectFamily::StudentT: return p.df > 2.0 ? p.scale * std::sqrt(p.df / (p.df - 2.0)) : p.scale;
        case EffectFamily::Logistic: return p.scale * std::numbers::pi / std::sqrt(3.0);
        default: return p.scale;
    }
}

// Mixture proposal for mu given the likelihood window and the prior.
struct MuProposal {
    double c1, s1, c2, s2;

    MuProposal(const GaussWindow& g, const EffectPrior& p) {
        const double ps = prior_spread(p);
        const double prec = 1.0 / g.v + 1.0 / (ps * ps);
        c1 = (g.mu_hat / g.v + p.location / (ps * ps)) / prec;
        s1 = 1.5 / std::sqrt(prec);
        c2 = g.mu_hat;
        s2 = 2.0 * std::sqrt(g.v);
    }
    double draw(RngStream& rng, std::student_t_distribution<double>& t4) const {
        const bool first = rng.uniform() < 0.8;
        return first ? c1 + s1 * t4(rng.engine()) : c2 + s2 * t4(rng.engine());
    }
    double log_density(double x) const {
        return log_sum_exp(std::log(0.8) + t4_logpdf(x, c1, s1), std::log(0.2) + t4_logpdf(x, c2, s2));
    }
};

MonteCarloEstimate summarize_weights(const std::vector<double>& logw) {
    const double ref = *std::max_element(logw.begin(), logw.end());
    if (!std::isfinite(ref)) throw Error(ErrorCode::DegenerateWeights, "all importance weights vanished");
    const double n = static_cast<double>(logw.size());
    double s1 = 0.0, s2 = 0.0;
    for (double lw : logw) {
        const double w = std::exp(lw - ref);
        s1 += w;
        s2 += w * w;
    }
    const double mean = s1 / n;
    const double var = std::max(0.0, s2 / n - mean * mean) * n / (n - 1.0);
    MonteCarloEstimate out;
    out.log_estimate = ref + std::log(mean);
    out.rel_se = std::sqrt(var / n) / mean;
    out.ess = s1 * s1 / s2;
    out.draws = logw.size();
    if (out.ess < 0.01 * n) {
        throw Error(ErrorCode::DegenerateWeights, "effective sample size " + fmt(out.ess) + " of " + fmt(n));
    }
    return out;
}

MonteCarloEstimate ce_oracle(const Eigen::ArrayXd& y, const Eigen::ArrayXd& var, const EffectPrior& prior,
                             std::optional<long long> total_n, std::size_t draws, RngStream& rng) {
    const auto g = gauss_window(y, var);
    const EffectPrior p = resolve_with_variance(prior, g.v, total_n);
    const EffectLogDensity logp(p);
    const MuProposal q(g, p);
    std::student_t_distribution<double> t4(4.0);
    std::vector<double> logw(draws);
    for (auto& lw : logw) {
        const double mu = q.draw(rng, t4);
        const double loglik =
            -0.5 * (kLog2Pi * static_cast<double>(y.size()) + var.log().sum() + ((y - mu).square() / var).sum());
        lw = loglik + logp(mu) - q.log_density(mu);
    }
    return summarize_weights(logw);
}

// Oracle for RE-type models on the axis w = log(tau^2 + shift) where shift is
// 0 for RE and sigma2_min for marema.
MonteCarloEstimate tau_oracle(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het, bool null,
                              double shift, std::size_t draws, RngStream& rng) {
    const Eigen::ArrayXd base = d.var() - shift;
    auto abs_tau2 = [&](double w) { return std::abs(std::exp(w) - shift); };
    auto total = [&](double w) -> Eigen::ArrayXd { return base + std::exp(w); };
    auto log_integrand = [&](double w) {
        const Eigen::ArrayXd t = total(w);
        const double inner =
            null ? log_null_likelihood(d.y(), t) : log_mu_marginal(d.y(), t, effect, d.total_n());
        return w + heterogeneity_log_density(het, abs_tau2(w), t) + inner;
    };

    // Posterior of w on a grid, only to place the proposal.
    const double center = shift > 0.0 ? std::log(shift) : log_median_var(d);
    std::vector<double> xs, ls;
    for (double w = center - 40.0; w <= center + 40.0; w += 0.1) {
        const double v = log_integrand(w);
        if (std::isfinite(v)) {
            xs.push_back(w);
            ls.push_back(v);
        }
    }
    const Proposal1D qw = grid_moments(xs, ls);
    const double sw = 1.5 * qw.scale;

    std::student_t_distribution<double> t4(4.0);
    std::vector<double> logw(draws);
    for (auto& lw : logw) {
        const double w = qw.loc + sw * t4(rng.engine());
        const Eigen::ArrayXd t = total(w);
        double lp = w + heterogeneity_log_density(het, abs_tau2(w), t) - t4_logpdf(w, qw.loc, sw);
        if (null) {
            lp += log_null_likelihood(d.y(), t);
        } else {
            const auto g = gauss_window(d.y(), t);
            const EffectPrior p = resolve_with_variance(effect, g.v, d.total_n());
            const MuProposal q(g, p);
            const double mu = q.draw(rng, t4);
            lp += -0.5 * (kLog2Pi * static_cast<double>(t.size()) + t.log().sum() + ((d.y() - mu).square() / t).sum()) +
                  EffectLogDensity(p)(mu) - q.log_density(mu);
        }
        lw = std::isnan(lp) ? kNegInf : lp;
    }
    return summarize_weights(logw);
}

}  // namespace

MonteCarloEstimate mc_marginal_oracle(const Dataset& d, const ModelSpec& m, const Hypothesis& h, std::size_t draws,
                                      RngStream& rng) {
    check_spec(d, m);
    if (draws < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 draws");
    const bool null = is_null(h);
    switch (m.kind) {
        case ModelKind::CE:
            if (null) return {log_null_likelihood(d.y(), d.var()), 0.0, static_cast<double>(draws), draws};
            return ce_oracle(d.y(), d.var(), m.effect_prior, d.total_n(), draws, rng);
        case ModelKind::FE: {
            if (null) return {log_null_likelihood(d.y(), d.var()), 0.0, static_cast<double>(draws), draws};
            MonteCarloEstimate out;
            out.ess = static_cast<double>(draws);
            out.draws = draws;
            double var_sum = 0.0;
            for (std::size_t i = 0; i < d.k(); ++i) {
                const auto& prior = m.fe_study_priors.empty() ? m.effect_prior : m.fe_study_priors[i];
                std::optional<long long> ni;
                if (d[i].n) ni = *d[i].n;
                const auto e = ce_oracle(Eigen::ArrayXd::Constant(1, d[i].y),
                                         Eigen::ArrayXd::Constant(1, d[i].se * d[i].se), prior, ni, draws, rng);
                out.log_estimate += e.log_estimate;
                var_sum += e.rel_se * e.rel_se;
                out.ess = std::min(out.ess, e.ess);
            }
            out.rel_se = std::sqrt(var_sum);
            return out;
        }
        case ModelKind::RE: return tau_oracle(d, m.effect_prior, *m.het_prior, null, 0.0, draws, rng);
        case ModelKind::Marema:
            return tau_oracle(d, m.effect_prior, *m.het_prior, null, d.sigma2_min(), draws, rng);
        case ModelKind::BMA: break;
    }
    throw Error(ErrorCode::InvalidModel, "the Monte Carlo oracle does not cover BMA");
}

// ---------------------------------------------------------------------------
// Savage-Dickey route. Uses tanh-sinh quadrature throughout so that it shares
// no integration code with log_marginal.

namespace {

using TanhSinh = boost::math::quadrature::tanh_sinh<double>;

template <class F>
double ts_integrate(TanhSinh& ts, F f, double a, double b, double tol = 1e-13) {
    double err = 0.0;
    return ts.integrate(f, a, b, tol, &err);
}

// E[p(mu)] under N(m, v), returned on the log scale.
double sd_log_expected_prior(TanhSinh& ts, const EffectPrior& p, double m, double v) {
    const double sd = std::sqrt(v);
    const EffectLogDensity logp(p);
    if (sd < 1e-7 * p.scale) return logp(m);
    const double lo = std::min(m - 14.0 * sd, p.location - 40.0 * p.scale);
    const double hi = std::max(m + 14.0 * sd, p.location + 40.0 * p.scale);
    std::vector<double> cuts{lo, hi, m, m - 2.0 * sd, m + 2.0 * sd, p.location, p.location - 3.0 * p.scale,
                             p.location + 3.0 * p.scale};
    for (auto& c : cuts) c = std::clamp(c, lo, hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto logf = [&](double x) { return log_normal_pdf(x, m, v) + logp(x); };
    double ref = kNegInf;
    for (double c : cuts) ref = std::max(ref, logf(c));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        sum += ts_integrate(ts, [&](double x) { return std::exp(logf(x) - ref); }, cuts[i], cuts[i + 1], 1e-10);
    }
    return ref + std::log(sum);
}

// log of posterior-ordinate / prior-ordinate at 0 given the total variances.
double log_conditional_ordinate_ratio(TanhSinh& ts, const GaussWindow& g, const EffectPrior& p) {
    if (p.family == EffectFamily::Normal) {
        const double s2 = p.scale * p.scale;
        const double v_post = 1.0 / (1.0 / g.v + 1.0 / s2);
        const double m_post = (g.mu_hat / g.v + p.location / s2) * v_post;
        return log_normal_pdf(0.0, m_post, v_post) - log_normal_pdf(0.0, p.location, s2);
    }
    return log_normal_pdf(0.0, g.mu_hat, g.v) - sd_log_expected_prior(ts, p, g.mu_hat, g.v);
}

}  // namespace

double savage_dickey_bf01(const Dataset& d, const ModelSpec& m) {
    check_spec(d, m);
    TanhSinh ts(15);
    if (m.kind == ModelKind::CE) {
        const auto g = gauss_window(d.y(), d.var());
        const EffectPrior p = resolve_with_variance(m.effect_prior, g.v, d.total_n());
        return std::exp(log_conditional_ordinate_ratio(ts, g, p));
    }
    if (m.kind != ModelKind::RE && m.kind != ModelKind::Marema) {
        throw Error(ErrorCode::InvalidModel, "Savage-Dickey ratio is implemented for CE, RE and marema");
    }
    if (m.effect_prior.depends_on_tau2()) {
        throw Error(ErrorCode::PriorNotIndependent, "the unit-information prior depends on tau^2");
    }
    const auto& het = *m.het_prior;
    const EffectPrior& p = m.effect_prior;
    const double shift = m.kind == ModelKind::Marema ? d.sigma2_min() : 0.0;
    const Eigen::ArrayXd base = d.var() - shift;

    // Axis w = log(tau^2 + shift); returns log posterior weight of w and the
    // log conditional ordinate ratio.
    // memoised: the numerator and denominator passes visit the same abscissas
    std::unordered_map<double, std::pair<double, double>> memo;
    auto eval = [&](double w) {
        if (auto it = memo.find(w); it != memo.end()) return it->second;
        const Eigen::ArrayXd t = base + std::exp(w);
        const auto g = gauss_window(d.y(), t);
        double log_m1 = g.log_c + 0.5 * (kLog2Pi + std::log(g.v));
        double ratio = 0.0;
        if (p.family == EffectFamily::Normal) {
            log_m1 += log_normal_pdf(g.mu_hat, p.location, g.v + p.scale * p.scale);
            ratio = log_conditional_ordinate_ratio(ts, g, p);
        } else {
            const double e = sd_log_expected_prior(ts, p, g.mu_hat, g.v);
            log_m1 += e;
            ratio = log_normal_pdf(0.0, g.mu_hat, g.v) - e;
        }
        const double lw = w + heterogeneity_log_density(het, std::abs(std::exp(w) - shift), t) + log_m1;
        return memo[w] = std::pair{lw, ratio};
    };

    const double center = shift > 0.0 ? std::log(shift) : log_median_var(d);
    double ref = kNegInf, wmax = center;
    std::vector<std::pair<double, double>> grid;
    for (double w = center - 60.0; w <= center + 60.0; w += 0.25) {
        double lw = eval(w).first;
        if (!std::isfinite(lw)) lw = kNegInf;  // w landed on the tau^2 = 0 singularity
        grid.emplace_back(w, lw);
        if (lw > ref) {
            ref = lw;
            wmax = w;
        }
    }
    double lo = grid.front().first, hi = grid.back().first;
    for (const auto& [w, lw] : grid) {
        if (lw > ref - 40.0) {
            lo = w - 0.25;
            break;
        }
    }
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        if (it->second > ref - 40.0) {
            hi = it->first + 0.25;
            break;
        }
    }
    std::vector<double> cuts{lo, hi, wmax};
    if (shift > 0.0 && std::log(shift) > lo && std::log(shift) < hi) cuts.push_back(std::log(shift));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        // exp(...) is not finite only where tau^2 rounds to exactly 0 under a
        // prior with an integrable singularity there.
        den += ts_integrate(
            ts,
            [&](double w) {
                const double v = std::exp(eval(w).first - ref);
                return std::isfinite(v) ? v : 0.0;
            },
            cuts[i], cuts[i + 1]);
        num += ts_integrate(
            ts,
            [&](double w) {
                const auto [lw, lr] = eval(w);
                const double v = std::exp(lw - ref + lr);
                return std::isfinite(v) ? v : 0.0;
            },
            cuts[i], cuts[i + 1]);
    }
    return num / den;
}

}  // namespace bfmeta
