#include "bfmeta/synthesis.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "bfmeta/error.hpp"
#include "bfmeta/parallel.hpp"

namespace bfmeta {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

Hypothesis null_for(ModelKind k) { return Hypothesis::null(target_of(k)); }
Hypothesis alt_for(ModelKind k) { return Hypothesis::alternative(target_of(k)); }

void finish(EvidenceReport& r, double log_bf10, double prior_odds) {
    r.log_bf10 = log_bf10;
    r.bf10 = std::exp(log_bf10);
    r.prior_odds = prior_odds;
    // evaluated on the log scale so that extreme factors keep full precision
    r.php_h1 = 1.0 / (1.0 + std::exp(-(log_bf10 + std::log(prior_odds))));
}

MarginalOptions tagged(MarginalOptions opt, const char* tag) {
    opt.dump_prefix += tag;
    return opt;
}

void check_odds(double prior_odds) {
    if (!(prior_odds > 0.0) || !std::isfinite(prior_odds)) {
        throw Error(ErrorCode::InvalidArgument, "prior odds must be positive and finite");
    }
}

}  // namespace

double posterior_hypothesis_prob(double bf10, double prior_odds) {
    if (!(bf10 > 0.0) || !(prior_odds > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "Bayes factor and prior odds must be positive");
    }
    const double x = bf10 * prior_odds;
    return std::isinf(x) ? 1.0 : x / (1.0 + x);
}

EvidenceReport bf_ce(const Dataset& d, const EffectPrior& effect, double prior_odds) {
    check_odds(prior_odds);
    ModelSpec m;
    m.kind = ModelKind::CE;
    m.effect_prior = effect;
    const auto l1 = log_marginal(d, m, alt_for(m.kind));
    const auto l0 = log_marginal(d, m, null_for(m.kind));
    EvidenceReport r;
    r.model = ModelKind::CE;
    r.effect_prior = describe(effect);
    finish(r, log_ratio(l1, l0), prior_odds);
    return r;
}

namespace {

EvidenceReport re_report(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het,
                         double prior_odds, const MarginalOptions& opt) {
    check_odds(prior_odds);
    ModelSpec m;
    m.kind = ModelKind::RE;
    m.effect_prior = effect;
    m.het_prior = het;
    const auto l1 = log_marginal(d, m, alt_for(m.kind), tagged(opt, "H1,"));
    const auto l0 = log_marginal(d, m, null_for(m.kind), tagged(opt, "H0,"));
    EvidenceReport r;
    r.model = ModelKind::RE;
    r.effect_prior = describe(effect);
    r.het_prior = describe(het);
    r.error_est = l1.rel_error + l0.rel_error;
    finish(r, log_ratio(l1, l0), prior_odds);
    return r;
}

EvidenceReport marema_report(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het,
                             double prior_odds, const MarginalOptions& opt) {
    check_odds(prior_odds);
    ModelSpec m;
    m.kind = ModelKind::Marema;
    m.effect_prior = effect;
    m.het_prior = het;
    check_spec(d, m);
    const auto p1 = marema_parts(d, effect, het, alt_for(m.kind), tagged(opt, "H1,"));
    const auto p0 = marema_parts(d, effect, het, null_for(m.kind), tagged(opt, "H0,"));
    EvidenceReport r;
    r.model = ModelKind::Marema;
    r.effect_prior = describe(effect);
    r.het_prior = describe(het);
    r.error_est = p1.total.rel_error + p0.total.rel_error;
    r.pr_tau2_pos = p1.pr_positive();
    r.notes.push_back("pr_tau2_pos is the posterior mass of tau^2 > 0 under H1 with the H1 effect prior");
    finish(r, log_ratio(p1.total, p0.total), prior_odds);
    return r;
}

}  // namespace

EvidenceReport bf_re(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het, double prior_odds) {
    return re_report(d, effect, het, prior_odds, {});
}

EvidenceReport bf_marema(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het,
                         double prior_odds) {
    return marema_report(d, effect, het, prior_odds, {});
}

EvidenceReport bf_bma(const Dataset& d, const EffectPrior& effect, const HeterogeneityPrior& het,
                      const std::array<double, 4>& weights, double prior_odds) {
    check_odds(prior_odds);
    ModelSpec m;
    m.kind = ModelKind::BMA;
    m.effect_prior = effect;
    m.het_prior = het;
    m.bma_weights = weights;
    check_spec(d, m);

    // log(p_i m_i) for (CE,H0), (CE,H1), (RE,H0), (RE,H1)
    std::array<double, 4> lw{kNegInf, kNegInf, kNegInf, kNegInf};
    double err = 0.0;
    ModelSpec sub = m;
    for (int i = 0; i < 4; ++i) {
        if (weights[i] <= 0.0) continue;
        sub.kind = i < 2 ? ModelKind::CE : ModelKind::RE;
        const auto h = i % 2 == 0 ? null_for(sub.kind) : alt_for(sub.kind);
        const auto lm = log_marginal(d, sub, h);
        lw[i] = std::log(weights[i]) + lm.value;
        err = std::max(err, lm.rel_error);
    }
    const double log_h1 = log_sum_exp(lw[1], lw[3]) - std::log(weights[1] + weights[3]);
    const double log_h0 = log_sum_exp(lw[0], lw[2]) - std::log(weights[0] + weights[2]);
    const double total = log_sum_exp(log_sum_exp(lw[0], lw[1]), log_sum_exp(lw[2], lw[3]));
    std::array<double, 4> post{};
    for (int i = 0; i < 4; ++i) post[i] = lw[i] == kNegInf ? 0.0 : std::exp(lw[i] - total);

    EvidenceReport r;
    r.model = ModelKind::BMA;
    r.effect_prior = describe(effect);
    r.het_prior = describe(het);
    r.error_est = 2.0 * err;
    r.submodel_probs = post;
    r.pr_re = post[2] + post[3];
    finish(r, log_h1 - log_h0, prior_odds);
    return r;
}

EvidenceReport bf_fe_product(const Dataset& d, const std::vector<EffectPrior>& study_priors, double prior_odds) {
    check_odds(prior_odds);
    if (study_priors.size() != d.k()) throw Error(ErrorCode::InvalidModel, "FE needs exactly one prior per study");
    EvidenceReport r;
    r.model = ModelKind::FE;
    double sum = 0.0;
    for (std::size_t i = 0; i < d.k(); ++i) {
        const auto single = validate_dataset({d[i]}, d.scale());
        const auto bf = bf_ce(single, study_priors[i]);
        r.study_bf10.push_back(bf.bf10);
        sum += bf.log_bf10;
    }
    bool same = true;
    for (const auto& p : study_priors) same = same && p == study_priors.front();
    r.effect_prior = same ? describe(study_priors.front()) : "per-study priors";
    finish(r, sum, prior_odds);
    return r;
}

EvidenceReport bf_fe_product(const Dataset& d, const EffectPrior& effect, double prior_odds) {
    return bf_fe_product(d, std::vector<EffectPrior>(d.k(), effect), prior_odds);
}

EvidenceReport evaluate(const Dataset& d, const ModelSpec& m, double prior_odds, const MarginalOptions& opt) {
    switch (m.kind) {
        case ModelKind::CE: return bf_ce(d, m.effect_prior, prior_odds);
        case ModelKind::RE:
            if (!m.het_prior) throw Error(ErrorCode::InvalidModel, "RE needs a heterogeneity prior");
            return re_report(d, m.effect_prior, *m.het_prior, prior_odds, opt);
        case ModelKind::Marema:
            if (!m.het_prior) throw Error(ErrorCode::InvalidModel, "marema needs a heterogeneity prior");
            return marema_report(d, m.effect_prior, *m.het_prior, prior_odds, opt);
        case ModelKind::BMA:
            if (!m.het_prior) throw Error(ErrorCode::InvalidModel, "BMA needs a heterogeneity prior");
            return bf_bma(d, m.effect_prior, *m.het_prior, m.bma_weights, prior_odds);
        case ModelKind::FE:
            if (m.fe_study_priors.empty()) return bf_fe_product(d, m.effect_prior, prior_odds);
            return bf_fe_product(d, m.fe_study_priors, prior_odds);
    }
    throw Error(ErrorCode::InvalidModel, "unknown model");
}

std::vector<double> ce_conditional_log_factors(const Dataset& d, double sigma0_sq) {
    std::vector<double> out;
    out.reserve(d.k());
    PosteriorSummary post{0.0, sigma0_sq};
    for (const auto& s : d.studies()) {
        const double var = s.se * s.se;
        // predictive N(m, v2 + sigma^2) under H1 against N(0, sigma^2) under H0
        const double pv = post.v2 + var;
        const double log_h1 = -0.5 * (std::log(pv) + (s.y - post.m) * (s.y - post.m) / pv);
        const double log_h0 = -0.5 * (std::log(var) + s.y * s.y / var);
        out.push_back(log_h1 - log_h0);
        post = ce_update(post, s.y, var);
    }
    return out;
}

EvidenceTrajectory sequential_trajectory(const Dataset& d, const ModelSpec& m, const std::vector<double>& thresholds) {
    EvidenceTrajectory t;
    t.model = m.kind;
    t.points.resize(d.k());
    const std::size_t need = min_studies(m);
    parallel_for(d.k(), [&](std::size_t i) {
        const std::size_t j = i + 1;
        t.points[i].j = j;
        if (j < need) return;
        const auto r = evaluate(d.prefix(j), m);
        t.points[i].bf10 = r.bf10;
        t.points[i].log_bf10 = r.log_bf10;
    });
    for (double thr : thresholds) {
        ThresholdCrossing c{thr, std::nullopt};
        for (const auto& p : t.points) {
            if (p.bf10 && *p.bf10 >= thr) {
                c.first_j = p.j;
                break;
            }
        }
        t.crossings.push_back(c);
    }
    return t;
}

nlohmann::ordered_json to_json(const EvidenceReport& r) {
    nlohmann::ordered_json j;
    j["model"] = std::string(to_string(r.model));
    j["bf10"] = r.bf10;
    j["log_bf10"] = r.log_bf10;
    j["bf01"] = r.bf01();
    j["prior_odds"] = r.prior_odds;
    j["php_h1"] = r.php_h1;
    j["pr_tau2_pos"] = r.pr_tau2_pos ? nlohmann::ordered_json(*r.pr_tau2_pos) : nullptr;
    j["pr_re"] = r.pr_re ? nlohmann::ordered_json(*r.pr_re) : nullptr;
    if (r.submodel_probs) {
        const auto& p = *r.submodel_probs;
        j["submodel_probs"] = {{"ce_h0", p[0]}, {"ce_h1", p[1]}, {"re_h0", p[2]}, {"re_h1", p[3]}};
    } else {
        j["submodel_probs"] = nullptr;
    }
    j["error_est"] = r.error_est;
    j["effect_prior"] = r.effect_prior;
    j["het_prior"] = r.het_prior.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.het_prior);
    if (!r.study_bf10.empty()) j["study_bf10"] = r.study_bf10;
    j["label"] = evidence_label(r.bf10);
    j["notes"] = r.notes;
    return j;
}

nlohmann::ordered_json to_json(const EvidenceTrajectory& t) {
    nlohmann::ordered_json j;
    j["model"] = std::string(to_string(t.model));
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : t.points) {
        pts.push_back({{"j", p.j},
                       {"bf10", p.bf10 ? nlohmann::ordered_json(*p.bf10) : nullptr},
                       {"log_bf10", p.log_bf10 ? nlohmann::ordered_json(*p.log_bf10) : nullptr}});
    }
    j["points"] = pts;
    auto cr = nlohmann::ordered_json::array();
    for (const auto& c : t.crossings) {
        cr.push_back({{"threshold", c.threshold},
                      {"alpha", 1.0 / c.threshold},
                      {"first_j", c.first_j ? nlohmann::ordered_json(*c.first_j) : nullptr}});
    }
    j["crossings"] = cr;
    return j;
}

void write_trajectory_csv(const EvidenceTrajectory& t, std::ostream& out) {
    out << "j,bf10,log_bf10\n";
    for (const auto& p : t.points) {
        out << p.j << ',' << (p.bf10 ? format_double(*p.bf10) : "NA") << ','
            << (p.log_bf10 ? format_double(*p.log_bf10) : "NA") << '\n';
    }
}

std::string evidence_label(double bf10) {
    const bool for_h1 = bf10 >= 1.0;
    const double b = for_h1 ? bf10 : 1.0 / bf10;
    const char* who = for_h1 ? "H1" : "H0";
    if (b < 3.0) return "not worth more than a bare mention";
    if (b < 20.0) return std::string("positive evidence for ") + who;
    if (b < 150.0) return std::string("strong evidence for ") + who;
    return std::string("very strong evidence for ") + who;
}

}  // namespace bfmeta
