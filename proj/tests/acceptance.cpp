// Acceptance checks, one PASS/FAIL/SKIP line per criterion. Exit status is
// non-zero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bfmeta/cli.hpp"
#include "bfmeta/error.hpp"
#include "bfmeta/evalue.hpp"
#include "bfmeta/frequentist.hpp"
#include "bfmeta/generate.hpp"
#include "bfmeta/marginals.hpp"
#include "bfmeta/simlab.hpp"
#include "bfmeta/synthesis.hpp"
#include "helpers.hpp"

using namespace bfmeta;
namespace fs = std::filesystem;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
    Status status = Status::Pass;
    std::vector<std::string> detail;

    void require(bool ok, const std::string& what) {
        if (!ok) status = Status::Fail;
        detail.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void note(const std::string& what) { detail.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ModelSpec spec(ModelKind kind, EffectPrior e, std::optional<HeterogeneityPrior> h = std::nullopt) {
    ModelSpec m;
    m.kind = kind;
    m.effect_prior = e;
    m.het_prior = h;
    return m;
}

const HeterogeneityPrior kHets[] = {HeterogeneityPrior::uniform_tau2(), HeterogeneityPrior::uniform_tau(),
                                    HeterogeneityPrior::berger_deely(),
                                    HeterogeneityPrior::inverse_gamma_tau(1, 0.15)};

// 1. closed-form CE Bayes factor against importance sampling
Outcome closed_form_vs_oracle() {
    Outcome o;
    RngStream gen(101);
    RngStream rng(102);
    const auto h1 = Hypothesis::alternative(HypothesisTarget::CommonEffect);
    const auto h0 = Hypothesis::null(HypothesisTarget::CommonEffect);
    for (int c = 0; c < 20; ++c) {
        auto d = testing::random_dataset(gen, 1, 12);
        const double s0 = std::pow(10.0, gen.uniform(-1.0, 1.0));
        const auto m = spec(ModelKind::CE, EffectPrior::normal(0, s0));
        const auto e1 = mc_marginal_oracle(d, m, h1, 100000, rng);
        const auto e0 = mc_marginal_oracle(d, m, h0, 100000, rng);
        const double mc = e1.log_estimate - e0.log_estimate;
        const double se = std::hypot(e1.rel_se, e0.rel_se);
        const double exact = -analytic_ce_bf01_normal(d, s0 * s0).log_bf01;
        o.require(std::abs(mc - exact) <= 3 * se,
                  fmt("case %2d k=%2zu s0=%.3f log B10 %.6f vs mc %.6f (se %.1e)", c, d.k(), s0, exact, mc, se));
    }
    return o;
}

// 2. Savage-Dickey against the marginal ratio
Outcome savage_dickey_panel() {
    Outcome o;
    RngStream gen(201);
    const EffectPrior effects[] = {EffectPrior::normal(0, 1), EffectPrior::student_t(0, 2.35, 13),
                                   EffectPrior::logistic(0, 0.5)};
    for (int c = 0; c < 10; ++c) {
        auto d = testing::random_dataset(gen, 3, 10);
        const ModelKind kind = c < 2 ? ModelKind::CE : (c % 2 ? ModelKind::Marema : ModelKind::RE);
        const auto m = spec(kind, effects[c % 3], kind == ModelKind::CE ? std::nullopt : std::optional(kHets[c % 4]));
        const double sd = savage_dickey_bf01(d, m);
        const double ratio = evaluate(d, m).bf01();
        o.require(std::abs(sd / ratio - 1.0) < 1e-4,
                  fmt("case %d %s %s %s: SD %.8g ratio %.8g", c, std::string(to_string(kind)).c_str(),
                      short_name(m.effect_prior).c_str(), m.het_prior ? short_name(*m.het_prior).c_str() : "-", sd,
                      ratio));
    }
    return o;
}

// 3. telescoping and product identities
Outcome identities() {
    Outcome o;
    RngStream gen(301);
    double worst_tel = 0.0, worst_prod = 0.0;
    for (int c = 0; c < 100; ++c) {
        auto d = testing::random_dataset(gen, 1, 25);
        const double s0 = std::pow(10.0, gen.uniform(-1.0, 1.0));
        const auto prior = EffectPrior::normal(0, s0);
        double tel = 0.0;
        for (double f : ce_conditional_log_factors(d, s0 * s0)) tel += f;
        worst_tel = std::max(worst_tel, std::abs(tel - bf_ce(d, prior).log_bf10));

        double prod = 0.0;
        for (std::size_t i = 0; i < d.k(); ++i) prod += bf_ce(validate_dataset({d[i]}, d.scale()), prior).log_bf10;
        worst_prod = std::max(worst_prod, std::abs(prod - bf_fe_product(d, prior).log_bf10));
    }
    o.require(worst_tel <= 1e-10, fmt("telescoping max |diff| %.2e (tol 1e-10)", worst_tel));
    o.require(worst_prod <= 1e-12, fmt("product max |diff| %.2e (tol 1e-12)", worst_prod));
    return o;
}

// 4. mean B10 under H0 for CE and FE
Outcome evalue_law() {
    Outcome o;
    const std::pair<const char*, EffectPrior> priors[] = {{"normal(0,0.1)", EffectPrior::normal(0, 0.1)},
                                                          {"t13(0,0.1)", EffectPrior::student_t(0, 0.1, 13)},
                                                          {"logistic(0,0.06)", EffectPrior::logistic(0, 0.06)}};
    std::uint64_t seed = 401;
    for (auto model : {ModelKind::CE, ModelKind::FE}) {
        for (const auto& [label, prior] : priors) {
            for (std::size_t k : {2, 5}) {
                EvalueCheckConfig cfg;
                cfg.model = model;
                cfg.effect = prior;
                cfg.k = k;
                cfg.reps = 10000;
                cfg.seed = seed++;
                cfg.prior_label = label;
                const auto r = expected_bf_under_null_mc(cfg);
                o.require(r.failures == 0 && std::abs(r.mean_bf - 1.0) <= 3 * r.mc_se,
                          fmt("%s %-16s k=%zu mean %.4f se %.4f z %+.2f", std::string(to_string(model)).c_str(),
                              label, k, r.mean_bf, r.mc_se, (r.mean_bf - 1.0) / r.mc_se));
            }
        }
    }
    return o;
}

// 5. RE e-value pattern across heterogeneity priors
Outcome evalue_pattern() {
    Outcome o;
    EvalueGridConfig cfg;
    cfg.ks = {3, 8};
    cfg.taus = {0.01, 0.5, 2.0};
    cfg.models = {ModelKind::RE};
    cfg.het_priors = {HeterogeneityPrior::uniform_tau2(), HeterogeneityPrior::inverse_gamma_tau(1, 0.15)};
    cfg.reps = 1000;
    cfg.seed = 20240103;
    bool ig_violated = false;
    for (const auto& r : run_evalue_grid(cfg)) {
        const std::string line = fmt("%-15s k=%zu tau=%-4g mean %.4f se %.4f %s", r.prior.c_str(), r.k, r.tau,
                                     r.mean_bf, r.mc_se, std::string(to_string(r.verdict)).c_str());
        if (r.prior == "uniform_tau2") {
            o.require(r.verdict != Verdict::Violated, line);
        } else {
            o.note(line);
            if (r.tau == 2.0 && r.verdict == Verdict::Violated) ig_violated = true;
        }
    }
    o.require(ig_violated, "ig_tau(1,0.15) exceeds 1 by more than 3 se at tau=2");
    return o;
}

bool have_empirical_data() {
    const auto dir = testing::source_dir() / "data";
    return fs::exists(dir / "lammertink2017.csv") && fs::exists(dir / "mcneely2010.csv");
}

Dataset lammertink() {
    return sort_by_year(read_dataset_csv(testing::source_dir() / "data" / "lammertink2017.csv", Scale::SMD));
}
Dataset mcneely() {
    return sort_by_year(read_dataset_csv(testing::source_dir() / "data" / "mcneely2010.csv", Scale::LogOdds));
}

void within(Outcome& o, const char* what, double got, double want, double rel) {
    o.require(std::abs(got / want - 1.0) <= rel, fmt("%s %.6g vs %.6g (rel %.0f%%)", what, got, want, rel * 100));
}
void within_abs(Outcome& o, const char* what, double got, double want, double tol) {
    o.require(std::abs(got - want) <= tol, fmt("%s %.4f vs %.4f (+-%.3f)", what, got, want, tol));
}

// 6. empirical values
Outcome empirical() {
    Outcome o;
    if (!have_empirical_data()) {
        o.status = Status::Skip;
        o.note("data/lammertink2017.csv and data/mcneely2010.csv not present");
        return o;
    }
    struct Expected {
        const char* name;
        Dataset d;
        double ce, re, marema, fe, bma, pr_pos, pr_re;
    };
    const Expected sets[] = {{"lammertink", lammertink(), 4.41e6, 138.402, 251.198, 3.71e3, 2.41e3, 0.570, 0.355},
                             {"mcneely", mcneely(), 1.112, 0.324, 0.349, 0.195, 0.659, 0.918, 0.649}};
    for (const auto& s : sets) {
        const auto e = default_effect_prior(s.d.scale());
        const auto bd = HeterogeneityPrior::berger_deely();
        const auto ig = HeterogeneityPrior::inverse_gamma_tau(1, 0.15);
        const auto ce = bf_ce(s.d, e);
        const auto re = bf_re(s.d, e, bd);
        const auto ma = bf_marema(s.d, e, bd);
        const auto fe = bf_fe_product(s.d, e);
        const auto bma = bf_bma(s.d, e, ig);
        const std::string n = s.name;
        within(o, (n + " CE").c_str(), ce.bf10, s.ce, 0.05);
        within(o, (n + " RE").c_str(), re.bf10, s.re, 0.05);
        within(o, (n + " marema").c_str(), ma.bf10, s.marema, 0.05);
        within(o, (n + " FE").c_str(), fe.bf10, s.fe, 0.05);
        within(o, (n + " BMA").c_str(), bma.bf10, s.bma, 0.15);
        const std::pair<const EvidenceReport*, double> rows[] = {
            {&ce, s.ce}, {&re, s.re}, {&ma, s.marema}, {&fe, s.fe}, {&bma, s.bma}};
        for (const auto& [r, want] : rows) {
            within_abs(o, (n + " PHP " + std::string(to_string(r->model))).c_str(), r->php_h1,
                       posterior_hypothesis_prob(want), 0.005);
        }
        within_abs(o, (n + " Pr(tau2>0)").c_str(), *ma.pr_tau2_pos, s.pr_pos, 0.02);
        within_abs(o, (n + " Pr(RE)").c_str(), *bma.pr_re, s.pr_re, 0.05);
    }
    const auto lam = sets[0].d;
    within(o, "lammertink RE N(0,1) uniform_tau2", bf_re(lam, EffectPrior::normal(0, 1), kHets[0]).bf10, 141.090,
           0.05);
    within(o, "lammertink RE N(0,0.5) berger_deely", bf_re(lam, EffectPrior::normal(0, 0.5), kHets[2]).bf10, 178.242,
           0.05);
    within(o, "mcneely marema t13 uniform_tau",
           bf_marema(sets[1].d, EffectPrior::student_t(0, 2.35, 13), kHets[1]).bf10, 0.359, 0.05);
    return o;
}

// 7. frequentist baseline on the same data
Outcome frequentist() {
    Outcome o;
    if (!have_empirical_data()) {
        o.status = Status::Skip;
        o.note("data/lammertink2017.csv and data/mcneely2010.csv not present");
        return o;
    }
    const auto lq = cochran_q(lammertink());
    const auto mc = mcneely();
    const auto mq = cochran_q(mc);
    o.require(lq.df == 9 && mq.df == 4, fmt("df %d and %d", lq.df, mq.df));
    within_abs(o, "lammertink Q", lq.q, 10.126, 0.001);
    within_abs(o, "lammertink Q p", lq.p, 0.340, 0.001);
    within_abs(o, "mcneely Q", mq.q, 7.765, 0.001);
    within_abs(o, "mcneely Q p", mq.p, 0.101, 0.001);
    const auto ce = ce_estimate(mc);
    const auto re = re_estimate(mc);
    within_abs(o, "mcneely CE z", ce.z, 2.259, 0.005);
    within_abs(o, "mcneely CE p", ce.p, 0.024, 0.005);
    within_abs(o, "mcneely RE z", re.z, 1.300, 0.01);
    within_abs(o, "mcneely RE p", re.p, 0.194, 0.01);
    return o;
}

// 8. Bartlett behaviour of the CE normal prior
Outcome bartlett() {
    Outcome o;
    std::vector<std::pair<std::string, Dataset>> sets{
        {"example_smd", read_dataset_csv(testing::source_dir() / "data" / "example_smd.csv", Scale::SMD)},
        {"homogeneous_smd", read_dataset_csv(testing::source_dir() / "data" / "homogeneous_smd.csv", Scale::SMD)},
        {"five_studies", testing::five_studies()}};
    if (have_empirical_data()) {
        sets.emplace_back("lammertink", lammertink());
        sets.emplace_back("mcneely", mcneely());
    }
    for (const auto& [name, d] : sets) {
        std::vector<double> bf;
        for (int i = 0; i <= 80; ++i) {
            const double s0 = std::pow(10.0, -1.0 + 4.0 * i / 80.0);
            bf.push_back(analytic_ce_bf01_normal(d, s0 * s0).bf10);
        }
        const auto peak = static_cast<std::size_t>(std::max_element(bf.begin(), bf.end()) - bf.begin());
        bool decreasing = true;
        for (std::size_t i = peak + 1; i < bf.size(); ++i) decreasing = decreasing && bf[i] < bf[i - 1];
        o.require(decreasing && bf.back() < 1e-3 * bf[peak],
                  fmt("%-16s peak at s0=%.3g, B10(1e3)/max = %.2e, decreasing after peak: %s", name.c_str(),
                      std::pow(10.0, -1.0 + 4.0 * static_cast<double>(peak) / 80.0), bf.back() / bf[peak],
                      decreasing ? "yes" : "no"));
    }
    return o;
}

// 9. prior robustness at k = 20, tau = 0.1
Outcome prior_robustness() {
    Outcome o;
    PriorRobustnessConfig cfg;
    cfg.ks = {20};
    cfg.mus = {0.0, 1.0};
    cfg.taus = {0.1};
    cfg.reps = 200;
    cfg.seed = 20240101;
    std::map<double, std::vector<double>> medians;
    for (const auto& c : run_prior_robustness(cfg)) {
        const bool sign_ok = c.mu == 0.0 ? c.q50 < 0.0 : c.q50 > 0.0;
        o.require(sign_ok && c.failures == 0,
                  fmt("mu=%g %-15s median log B10 %+.3f (failures %zu)", c.mu, c.prior.c_str(), c.q50, c.failures));
        medians[c.mu].push_back(c.q50);
    }
    for (const auto& [mu, m] : medians) {
        const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
        o.require(*hi - *lo < 1.0, fmt("mu=%g cross-prior median spread %.3f (band < 1.0)", mu, *hi - *lo));
    }
    return o;
}

// 10. five-model illustration, K = 10
Outcome illustration() {
    Outcome o;
    IllustrationConfig cfg;
    cfg.k = 10;
    cfg.taus = {0.0, 0.75, 1.0};
    cfg.reps = 500;
    cfg.seed = 20240102;
    const auto rows = run_illustration(cfg);
    // kIllustrationModels order: CE, FE, RE, marema, BMA
    for (const auto& r : rows) {
        std::string line = fmt("tau=%-4g", r.tau);
        for (std::size_t i = 0; i < 5; ++i)
            line += fmt(" %s %+.3f", std::string(to_string(kIllustrationModels[i])).c_str(), r.median_log_bf01[i]);
        o.note(line);
    }
    const auto& t0 = rows[0].median_log_bf01;
    const auto& t75 = rows[1].median_log_bf01;
    const auto& t1 = rows[2].median_log_bf01;
    bool split = true;
    for (std::size_t i : {0u, 2u, 3u, 4u}) split = split && std::signbit(t75[i]) != std::signbit(t75[1]);
    o.require(split, "tau=0.75: FE has the opposite sign to CE, RE, marema and BMA");
    const double hi = std::max({t1[2], t1[3], t1[4]}), lo = std::min({t1[2], t1[3], t1[4]});
    o.require(hi - lo <= 0.5, fmt("tau=1: RE/marema/BMA medians span %.3f (<= 0.5)", hi - lo));
    o.require(t0[3] >= t0[2], fmt("tau=0: marema median log B01 %.3f >= RE %.3f", t0[3], t0[2]));
    return o;
}

int call(std::vector<std::string> args) {
    args.insert(args.begin(), "bfmeta");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = testing::slurp(e.path());
    }
    return files;
}

// 11. byte-identical reruns of every command
Outcome determinism() {
    Outcome o;
    const auto work = testing::fresh_dir("acceptance_determinism");
    const auto data = (testing::source_dir() / "data" / "example_smd.csv").string();
    testing::spit(work / "robustness.cfg",
                  "scenario = prior_robustness\nseed = 5\nk = 3, 5\nmu = 0, 0.5\ntau = 0.2\nreps = 50\n");
    testing::spit(work / "illustration.cfg", "scenario = illustration\nseed = 6\nk = 4\ntau = 0, 0.5\nreps = 50\n");
    testing::spit(work / "evalue.cfg",
                  "scenario = evalue_grid\nseed = 7\nmodels = RE\nk = 3\ntau = 0.1, 1\nreps = 100\n");
    const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
        {"analyze", {"analyze", "--dataset", data, "--seed", "11"}},
        {"sequential", {"sequential", "--dataset", data, "--order", "year", "--seed", "11"}},
        {"forest", {"forest", "--dataset", data, "--svg"}},
        {"check-evalue", {"check-evalue", "--k", "3", "--tau", "0.5", "--reps", "200", "--seed", "11"}},
        {"simulate robustness", {"simulate", (work / "robustness.cfg").string()}},
        {"simulate illustration", {"simulate", (work / "illustration.cfg").string()}},
        {"simulate evalue", {"simulate", (work / "evalue.cfg").string()}},
    };
    int idx = 0;
    for (const auto& [name, args] : runs) {
        std::vector<std::map<std::string, std::string>> snaps;
        for (int rerun = 0; rerun < 2; ++rerun) {
            const auto out = work / fmt("run%d_%d", idx, rerun);
            auto a = args;
            a.insert(a.end(), {"--out", out.string()});
            const int code = call(a);
            if (code != 0) {
                o.require(false, fmt("%s exited %d", name.c_str(), code));
                break;
            }
            snaps.push_back(snapshot(out));
        }
        ++idx;
        if (snaps.size() != 2) continue;
        o.require(!snaps[0].empty() && snaps[0] == snaps[1],
                  fmt("%-22s %zu files byte-identical", name.c_str(), snaps[0].size()));
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"closed-form CE vs Monte Carlo oracle", closed_form_vs_oracle},
        {"Savage-Dickey vs marginal ratio", savage_dickey_panel},
        {"telescoping and product identities", identities},
        {"CE/FE mean B10 under H0", evalue_law},
        {"RE e-value pattern by heterogeneity prior", evalue_pattern},
        {"empirical Bayes factors", empirical},
        {"frequentist baseline", frequentist},
        {"Bartlett behaviour", bartlett},
        {"heterogeneity prior robustness", prior_robustness},
        {"five-model illustration", illustration},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.status = Status::Fail;
            o.detail.push_back(std::string("FAIL threw: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
        if (o.status == Status::Fail) ++failed;
        std::cout << fmt("criterion %2zu %s  %-44s %8.2f s", i + 1, tag, criteria[i].first.c_str(), secs) << '\n';
        for (const auto& line : o.detail) std::cout << "      " << line << '\n';
        std::cout.flush();
    }
    std::cout << (failed ? fmt("%d criterion(s) failed", failed) : std::string("all criteria passed or skipped"))
              << '\n';
    return failed ? 1 : 0;
}
