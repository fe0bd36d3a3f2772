#include "bfmeta/evalue.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "bfmeta/error.hpp"
#include "bfmeta/frequentist.hpp"
#include "bfmeta/generate.hpp"
#include "bfmeta/parallel.hpp"
#include "bfmeta/synthesis.hpp"

namespace bfmeta {

SafeDecision safe_reject(double bf10, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must lie in (0, 1)");
    if (!(bf10 > 0.0)) throw Error(ErrorCode::InvalidArgument, "Bayes factor must be positive");
    SafeDecision d;
    d.bf10 = bf10;
    d.alpha = alpha;
    d.threshold = 1.0 / alpha;
    d.p_e = 1.0 / bf10;
    // compared as p_E <= alpha so that both readings agree exactly
    d.reject = d.p_e <= alpha;
    d.note = "valid for a threshold chosen after seeing the data and under optional stopping, "
             "provided B10 is an e-value for the model";
    return d;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::Borderline: return "borderline";
        case Verdict::Violated: return "violated";
    }
    return "satisfied";
}

Verdict classify_mean(double mean, double mc_se) noexcept {
    if (mean <= 1.0) return Verdict::Satisfied;
    if (mean - 3.0 * mc_se > 1.0) return Verdict::Violated;
    return Verdict::Borderline;
}

EvalueCheckResult expected_bf_under_null_mc(const EvalueCheckConfig& cfg) {
    if (cfg.reps < 100) throw Error(ErrorCode::InvalidArgument, "need at least 100 replications");
    if (cfg.model == ModelKind::BMA) throw Error(ErrorCode::InvalidModel, "e-value check covers CE, FE, RE, marema");
    ModelSpec spec;
    spec.kind = cfg.model;
    spec.effect_prior = cfg.effect;
    spec.het_prior = cfg.het;
    const bool random_effects = cfg.model == ModelKind::RE || cfg.model == ModelKind::Marema;
    const double tau = random_effects ? cfg.tau : 0.0;

    EvalueCheckResult out;
    out.k = cfg.k;
    out.tau = cfg.tau;
    out.prior = cfg.prior_label;
    out.model = cfg.model;
    out.bf10.assign(cfg.reps, std::numeric_limits<double>::quiet_NaN());
    parallel_for(
        cfg.reps,
        [&](std::size_t r) {
            RngStream rng(cfg.seed, {r});
            const auto d = simulate_meta_dataset(cfg.k, 0.0, tau, cfg.sigma_lo, cfg.sigma_hi, rng);
            try {
                out.bf10[r] = evaluate(d, spec).bf10;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Numerical) throw;
            }
        },
        cfg.threads);

    double s1 = 0.0, s2 = 0.0;
    std::size_t n = 0;
    for (double b : out.bf10) {
        if (std::isnan(b)) continue;
        s1 += b;
        s2 += b * b;
        ++n;
    }
    out.reps = n;
    out.failures = cfg.reps - n;
    out.flagged = out.failures * 100 > cfg.reps;
    if (n >= 2) {
        out.mean_bf = s1 / n;
        const double var = std::max(0.0, (s2 - n * out.mean_bf * out.mean_bf) / (n - 1.0));
        out.mc_se = std::sqrt(var / n);
    }
    out.verdict = classify_mean(out.mean_bf, out.mc_se);
    return out;
}

void write_evalue_csv(const std::vector<EvalueCheckResult>& rows, std::ostream& out) {
    out << "k,tau,prior,model,reps,mean_bf,mc_se,verdict\n";
    for (const auto& r : rows) {
        out << r.k << ',' << format_double(r.tau) << ',' << csv_field(r.prior) << ',' << to_string(r.model) << ',' << r.reps << ','
            << format_double(r.mean_bf) << ',' << format_double(r.mc_se) << ',' << to_string(r.verdict) << '\n';
    }
}

std::vector<ReciprocalPPoint> reciprocal_p_demo(const std::vector<std::size_t>& checkpoints, std::uint64_t seed) {
    std::vector<ReciprocalPPoint> out;
    RngStream rng(seed);
    double sum = 0.0;
    std::size_t done = 0;
    for (std::size_t target : checkpoints) {
        for (; done < target; ++done) sum += 1.0 / two_sided_p(rng.normal());
        out.push_back({done, done ? sum / static_cast<double>(done) : 0.0});
    }
    return out;
}

}  // namespace bfmeta
