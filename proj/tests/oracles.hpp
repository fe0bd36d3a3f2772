#pragma once

// Independent re-implementations used as test oracles. Nothing here calls into
// the library's likelihood, prior or quadrature code.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

struct Data {
    std::vector<double> y;
    std::vector<double> se;
    std::optional<long long> total_n;

    double sigma2_min() const {
        double m = std::numeric_limits<double>::infinity();
        for (double s : se) m = std::min(m, s * s);
        return m;
    }
};

inline double naive_loglik(const Data& d, double mu, double tau2) {
    double out = 0.0;
    for (std::size_t i = 0; i < d.y.size(); ++i) {
        const double v = d.se[i] * d.se[i] + tau2;
        const double r = d.y[i] - mu;
        out += -0.5 * std::log(2.0 * std::numbers::pi * v) - r * r / (2.0 * v);
    }
    return out;
}

// log N(y | mean * 1, diag(se^2 + tau2) + prior_var * 11')
inline double mvn_log_density(const Data& d, double tau2, double mean, double prior_var) {
    const auto k = static_cast<Eigen::Index>(d.y.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(k, k, prior_var);
    Eigen::VectorXd r(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        cov(i, i) += d.se[static_cast<std::size_t>(i)] * d.se[static_cast<std::size_t>(i)] + tau2;
        r(i) = d.y[static_cast<std::size_t>(i)] - mean;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    const double logdet = ldlt.vectorD().array().log().sum();
    const double quad = r.dot(ldlt.solve(r));
    return -0.5 * (static_cast<double>(k) * std::log(2.0 * std::numbers::pi) + logdet + quad);
}

enum class Het { UniformTau2, UniformTau, BergerDeely, IGTau };

// Prior on the tau^2 axis; improper ones carry whatever constant, the tests
// only compare ratios for those.
inline double het_log_density(Het h, double tau2, const Data& d, double a = 1.0, double b = 0.15) {
    const double at = std::abs(tau2);
    switch (h) {
        case Het::UniformTau2: return 0.0;
        case Het::UniformTau: return -0.5 * std::log(at);
        case Het::BergerDeely: {
            double s = 0.0;
            for (double se : d.se) s += std::log(se * se + tau2);
            return -s / static_cast<double>(d.se.size());
        }
        case Het::IGTau: {
            const double tau = std::sqrt(at);
            return a * std::log(b) - std::lgamma(a) - (a + 1.0) * std::log(tau) - b / tau - std::log(2.0 * tau);
        }
    }
    return 0.0;
}

// Effect prior N(mean, sd^2) (sd <= 0 means the unit-information prior) or a
// point null at 0 when null is set.
struct NormalEffect {
    double mean = 0.0;
    double sd = 1.0;
    bool null = false;
    bool unit_information = false;
};

inline double log_marginal_given_tau2(const Data& d, double tau2, const NormalEffect& e) {
    if (e.null) return mvn_log_density(d, tau2, 0.0, 0.0);
    double var = e.sd * e.sd;
    if (e.unit_information) {
        double w = 0.0;
        for (double se : d.se) w += 1.0 / (se * se + tau2);
        var = static_cast<double>(*d.total_n) / w;
    }
    return mvn_log_density(d, tau2, e.mean, var);
}

// log of integral over tau^2 of exp(log_marginal_given_tau2) p(tau^2). Lower
// bound 0 for RE, -sigma2_min for marema. `ref` keeps the exponentials in range.
struct TauIntegral {
    double log_total = 0.0;
    double log_positive = 0.0;
    double log_negative = -std::numeric_limits<double>::infinity();
};

inline TauIntegral integrate_tau2(const Data& d, const NormalEffect& e, Het h, bool marema, double a = 1.0,
                                  double b = 0.15) {
    const double ref = log_marginal_given_tau2(d, 0.0, e);
    auto f = [&](double t2) {
        const double v = log_marginal_given_tau2(d, t2, e) + het_log_density(h, t2, d, a, b) - ref;
        return std::isfinite(v) ? std::exp(v) : 0.0;  // endpoints only
    };
    boost::math::quadrature::exp_sinh<double> es;
    const double pos = es.integrate(f, 0.0, std::numeric_limits<double>::infinity());
    TauIntegral out;
    out.log_positive = std::log(pos) + ref;
    double neg = 0.0;
    if (marema) {
        boost::math::quadrature::tanh_sinh<double> ts;
        neg = ts.integrate(f, -d.sigma2_min(), 0.0);
        out.log_negative = std::log(neg) + ref;
    }
    out.log_total = std::log(pos + neg) + ref;
    return out;
}

// Same, for an arbitrary effect log density: the mu integral is done with a
// Gauss-Kronrod rule on the whole real line.
template <class LogPrior>
double log_marginal_general(const Data& d, LogPrior log_prior, std::optional<Het> h, bool marema = false,
                            double a = 1.0, double b = 0.15) {
    double ref = -std::numeric_limits<double>::infinity();
    for (double mu = -3.0; mu <= 3.0; mu += 0.01) ref = std::max(ref, naive_loglik(d, mu, 0.0) + log_prior(mu));
    auto inner = [&](double t2) {
        auto g = [&](double mu) { return std::exp(naive_loglik(d, mu, t2) + log_prior(mu) - ref); };
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            g, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-12);
    };
    if (!h) return std::log(inner(0.0)) + ref;
    auto f = [&](double t2) {
        const double v = inner(t2) * std::exp(het_log_density(*h, t2, d, a, b));
        return std::isfinite(v) ? v : 0.0;
    };
    boost::math::quadrature::exp_sinh<double> es;
    double total = es.integrate(f, 0.0, std::numeric_limits<double>::infinity());
    if (marema) {
        boost::math::quadrature::tanh_sinh<double> ts;
        total += ts.integrate(f, -d.sigma2_min(), 0.0);
    }
    return std::log(total) + ref;
}

inline double student_t_log_density(double x, double loc, double scale, double df) {
    const double z = (x - loc) / scale;
    return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi) -
           std::log(scale) - 0.5 * (df + 1.0) * std::log1p(z * z / df);
}

inline double logistic_log_density(double x, double loc, double scale) {
    const double z = -std::abs(x - loc) / scale;
    return z - std::log(scale) - 2.0 * std::log1p(std::exp(z));
}

// CE Normal prior closed form, written directly from the two normal densities.
inline double ce_log_bf10_normal(const Data& d, double sigma0_sq) {
    return mvn_log_density(d, 0.0, 0.0, sigma0_sq) - mvn_log_density(d, 0.0, 0.0, 0.0);
}

}  // namespace oracle
