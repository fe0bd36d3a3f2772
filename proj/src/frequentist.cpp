#include "bfmeta/frequentist.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "bfmeta/error.hpp"

namespace bfmeta {

namespace {

void require_two(const Dataset& d) {
    if (d.k() < 2) throw Error(ErrorCode::TooFewStudies, "needs at least 2 studies");
}

}  // namespace

double two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

QTestResult cochran_q(const Dataset& d) {
    require_two(d);
    const Eigen::ArrayXd w = d.var().inverse();
    const double ybar = (w * d.y()).sum() / w.sum();
    QTestResult r;
    r.q = (w * (d.y() - ybar).square()).sum();
    r.df = static_cast<int>(d.k()) - 1;
    r.p = boost::math::gamma_q(0.5 * r.df, 0.5 * r.q);
    return r;
}

ClassicalEstimate re_estimate_fixed_tau2(const Dataset& d, double tau2) {
    const Eigen::ArrayXd w = (d.var() + tau2).inverse();
    ClassicalEstimate e;
    e.model = ModelKind::RE;
    e.estimate = (w * d.y()).sum() / w.sum();
    e.se = 1.0 / std::sqrt(w.sum());
    e.z = e.estimate / e.se;
    e.p = two_sided_p(e.z);
    e.tau2 = tau2;
    e.estimator = "fixed";
    return e;
}

ClassicalEstimate ce_estimate(const Dataset& d) {
    auto e = re_estimate_fixed_tau2(d, 0.0);
    e.model = ModelKind::CE;
    e.tau2.reset();
    e.estimator.clear();
    return e;
}

double tau2_dersimonian_laird(const Dataset& d) {
    require_two(d);
    const Eigen::ArrayXd w = d.var().inverse();
    const double q = cochran_q(d).q;
    const double c = w.sum() - w.square().sum() / w.sum();
    return std::max(0.0, (q - static_cast<double>(d.k() - 1)) / c);
}

std::optional<double> tau2_reml(const Dataset& d) {
    require_two(d);
    const Eigen::VectorXd y = d.y().matrix();
    double tau2 = tau2_dersimonian_laird(d);
    for (int iter = 0; iter < 200; ++iter) {
        const Eigen::VectorXd w = (d.var() + tau2).inverse().matrix();
        // P = W - W 1 1' W / sum(w)
        Eigen::MatrixXd p = -(w * w.transpose()) / w.sum();
        p.diagonal() += w;
        const Eigen::VectorXd py = p * y;
        const double trace_p = p.trace();
        const double trace_pp = (p.array() * p.array()).sum();  // P symmetric
        double step = (py.squaredNorm() - trace_p) / trace_pp;
        double next = tau2 + step;
        while (next < 0.0) {
            step *= 0.5;
            next = tau2 + step;
        }
        const bool done = std::abs(next - tau2) < 1e-10;
        tau2 = next;
        if (done) return tau2 < 1e-10 ? 0.0 : tau2;
    }
    return std::nullopt;
}

ClassicalEstimate re_estimate(const Dataset& d, Tau2Estimator estimator) {
    require_two(d);
    if (estimator == Tau2Estimator::REML) {
        if (const auto t = tau2_reml(d)) {
            auto e = re_estimate_fixed_tau2(d, *t);
            e.estimator = "REML";
            return e;
        }
        auto e = re_estimate_fixed_tau2(d, tau2_dersimonian_laird(d));
        e.estimator = "DL";
        e.warnings.push_back("NoConvergence: REML did not converge in 200 iterations; DerSimonian-Laird used");
        return e;
    }
    auto e = re_estimate_fixed_tau2(d, tau2_dersimonian_laird(d));
    e.estimator = "DL";
    return e;
}

nlohmann::ordered_json to_json(const QTestResult& q) {
    return {{"q", q.q}, {"df", q.df}, {"p", q.p}};
}

nlohmann::ordered_json to_json(const ClassicalEstimate& e) {
    nlohmann::ordered_json j;
    j["model"] = std::string(to_string(e.model));
    j["estimate"] = e.estimate;
    j["se"] = e.se;
    j["z"] = e.z;
    j["p"] = e.p;
    j["tau2"] = e.tau2 ? nlohmann::ordered_json(*e.tau2) : nullptr;
    j["tau2_estimator"] = e.estimator.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(e.estimator);
    j["warnings"] = e.warnings;
    return j;
}

}  // namespace bfmeta
