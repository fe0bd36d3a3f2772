#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "bfmeta/error.hpp"
#include "bfmeta/generate.hpp"
#include "bfmeta/simlab.hpp"
#include "helpers.hpp"

using namespace bfmeta;

namespace {

bool config_error(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code() == ErrorCode::ConfigParse;
    }
    return false;
}

}  // namespace

TEST_SUITE("simlab") {

TEST_CASE("data generation") {
    RngStream a(5, {1, 2}), b(5, {1, 2}), c(5, {1, 3});
    auto d1 = simulate_meta_dataset(6, 0.3, 0.0, 0.2, 0.8, a);
    auto d2 = simulate_meta_dataset(6, 0.3, 0.0, 0.2, 0.8, b);
    auto d3 = simulate_meta_dataset(6, 0.3, 0.0, 0.2, 0.8, c);
    CHECK(d1.k() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(d1[i].y == d2[i].y);
        CHECK(d1[i].se >= 0.2);
        CHECK(d1[i].se <= 0.8);
    }
    CHECK(d1[0].y != d3[0].y);

    // theta_i = mu when tau = 0, so y_i - mu has variance sigma_i^2
    RngStream rng(8);
    double z2 = 0.0;
    std::size_t n = 0;
    for (int rep = 0; rep < 2000; ++rep) {
        auto d = simulate_meta_dataset(5, 0.4, 0.0, 0.2, 0.8, rng);
        for (const auto& s : d.studies()) z2 += (s.y - 0.4) * (s.y - 0.4) / (s.se * s.se), ++n;
    }
    CHECK(std::abs(z2 / n - 1.0) < 0.05);
}

TEST_CASE("sample quantiles") {
    CHECK(sample_quantile({1, 2, 3, 4, 5}, 0.5) == 3.0);
    CHECK(sample_quantile({1, 2, 3, 4}, 0.5) == 2.5);
    CHECK(sample_quantile({4, NAN, 1, 2, 3}, 0.0) == 1.0);
    CHECK(sample_quantile({1, 2, 3, 4, 5}, 0.05) == doctest::Approx(1.2));
    CHECK(std::isnan(sample_quantile({NAN}, 0.5)));
}

TEST_CASE("config validation") {
    PriorRobustnessConfig r;
    r.reps = 10;
    CHECK(config_error([&] { validate(r); }));
    r.reps = 100;
    r.ks.clear();
    CHECK(config_error([&] { validate(r); }));
    r.ks = {3};
    r.sigma_lo = 0.9;
    CHECK(config_error([&] { validate(r); }));

    SensitivityConfig s;
    auto d = testing::five_studies();
    CHECK(config_error([&] { run_sensitivity(d, s); }));
    s.effect_priors = {EffectPrior::normal(0, 1)};
    CHECK(config_error([&] { run_sensitivity(d, s); }));
    s.het_priors = {HeterogeneityPrior::berger_deely()};
    CHECK(run_sensitivity(d, s).size() == 2);

    EvalueGridConfig e;
    e.models = {ModelKind::BMA};
    CHECK(config_error([&] { validate(e); }));
    CHECK(config_error([] { parse_scenario("no_such_scenario"); }));
    for (auto sc : {Scenario::PriorRobustness, Scenario::Illustration, Scenario::EvalueGrid,
                    Scenario::EmpiricalSensitivity})
        CHECK(parse_scenario(to_string(sc)) == sc);
}

TEST_CASE("prior robustness is deterministic and ordered") {
    PriorRobustnessConfig cfg;
    cfg.ks = {3, 5};
    cfg.mus = {0.0, 0.5};
    cfg.taus = {0.2};
    cfg.reps = 60;
    cfg.seed = 9;
    cfg.threads = 1;
    auto a = run_prior_robustness(cfg);
    cfg.threads = 3;
    auto b = run_prior_robustness(cfg);
    REQUIRE(a.size() == 2 * 2 * 4);
    CHECK(a[0].k == 3);
    CHECK(a[0].mu == 0.0);
    CHECK(a[0].prior == "uniform_tau2");
    CHECK(a[3].prior == "ig_tau(1,0.15)");
    CHECK(a[4].mu == 0.5);
    CHECK(a.back().k == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].log_bf10 == b[i].log_bf10);
        CHECK(a[i].q05 <= a[i].q50);
        CHECK(a[i].q50 <= a[i].q95);
        CHECK(a[i].reps + a[i].failures == 60);
    }
}

// Spot check on five cells: a 200-rep median falls inside the 5-95% band of
// an independent 2000-rep run.
TEST_CASE("desk-scale medians sit inside the paper-scale band") {
    PriorRobustnessConfig big;
    big.ks = {3};
    big.mus = {0.0, 0.2, 0.5, 1.0, 1.5};
    big.taus = {0.5};
    big.het_priors = {HeterogeneityPrior::berger_deely()};
    big.reps = 2000;
    big.seed = 101;
    auto small_cfg = big;
    small_cfg.reps = 200;
    small_cfg.seed = 202;
    auto ref = run_prior_robustness(big);
    auto desk = run_prior_robustness(small_cfg);
    REQUIRE(ref.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CAPTURE(ref[i].mu);
        CHECK(desk[i].q50 >= ref[i].q05);
        CHECK(desk[i].q50 <= ref[i].q95);
    }
}

TEST_CASE("illustration rows") {
    IllustrationConfig cfg;
    cfg.taus = {0.0, 1.0};
    cfg.reps = 60;
    cfg.seed = 3;
    auto rows = run_illustration(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].tau == 0.0);
    CHECK(rows[1].reps == 60);
    CHECK(rows[0].median_pr_re >= 0.0);
    CHECK(rows[0].median_pr_re <= 1.0);
    cfg.threads = 2;
    auto again = run_illustration(cfg);
    for (std::size_t m = 0; m < 5; ++m) CHECK(again[1].median_log_bf01[m] == rows[1].median_log_bf01[m]);
    cfg.k = 2;
    CHECK(config_error([&] { validate(cfg); }));
}

TEST_CASE("e-value grid ordering") {
    EvalueGridConfig cfg;
    cfg.ks = {3};
    cfg.taus = {0.1, 1.0};
    cfg.models = {ModelKind::CE, ModelKind::RE};
    cfg.het_priors = {HeterogeneityPrior::uniform_tau2(), HeterogeneityPrior::berger_deely()};
    cfg.effect_priors = {EffectPrior::normal(0, 0.5)};
    cfg.reps = 100;
    auto rows = run_evalue_grid(cfg);
    REQUIRE(rows.size() == 1 + 2 * 2);
    CHECK(rows[0].model == ModelKind::CE);
    CHECK(rows[0].prior == "none");
    CHECK(rows[1].model == ModelKind::RE);
    CHECK(rows[1].prior == "uniform_tau2");
    CHECK(rows[1].tau == 0.1);
    CHECK(rows[2].tau == 1.0);
    CHECK(rows[3].prior == "berger_deely");
}

TEST_CASE("scenario files") {
    const auto dir = testing::fresh_dir("scenario");
    SUBCASE("robustness bundle") {
        testing::spit(dir / "r.cfg",
                      "scenario = prior_robustness\nseed = 4\nreps = 50\nk = 3\nmu = 0\ntau = 0.5\n"
                      "het_priors = berger_deely, ig_tau(1,0.15)\n");
        auto res = run_scenario_file(dir / "r.cfg", dir / "out");
        CHECK(res.scenario == Scenario::PriorRobustness);
        CHECK(std::filesystem::exists(dir / "out" / "quantiles.csv"));
        CHECK(std::filesystem::exists(dir / "out" / "scenario_cell_3_0_0.5_ig_tau_1_0.15.csv"));
        CHECK(res.files.back().filename() == "summary.json");
        const auto first = testing::slurp(dir / "out" / "quantiles.csv");
        CHECK(first.rfind("k,mu,tau,prior,reps,failures,q05,q50,q95\n", 0) == 0);
        run_scenario_file(dir / "r.cfg", dir / "out2");
        for (const auto& f : res.files) CHECK(testing::slurp(f) == testing::slurp(dir / "out2" / f.filename()));
        ScenarioOptions opt;
        opt.seed = 5;
        run_scenario_file(dir / "r.cfg", dir / "out3", opt);
        CHECK(testing::slurp(dir / "out3" / "quantiles.csv") != first);
    }
    SUBCASE("sensitivity bundle") {
        testing::spit(dir / "s.cfg",
                      "scenario = empirical_sensitivity\ndataset = " +
                          (testing::source_dir() / "data" / "example_smd.csv").string() +
                          "\norder = year\nmodels = RE\neffect_priors = normal(0,1), normal(0,0.5)\n"
                          "het_priors = berger_deely, ig_tau(1,0.15)\n");
        auto res = run_scenario_file(dir / "s.cfg", dir / "sens");
        const auto csv = testing::slurp(dir / "sens" / "sensitivity.csv");
        CHECK(csv.rfind("model,effect_prior,het_prior,bf10,log_bf10,php_h1,pr_tau2_pos,pr_re\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    }
    SUBCASE("malformed files") {
        testing::spit(dir / "bad1.cfg", "scenario = prior_robustness\nreps = 10\n");
        CHECK(config_error([&] { run_scenario_file(dir / "bad1.cfg", dir / "x"); }));
        testing::spit(dir / "bad2.cfg", "scenario = illustration\ncolour = blue\n");
        CHECK(config_error([&] { run_scenario_file(dir / "bad2.cfg", dir / "x"); }));
        testing::spit(dir / "bad3.cfg", "this is not a config\n");
        CHECK(config_error([&] { run_scenario_file(dir / "bad3.cfg", dir / "x"); }));
        testing::spit(dir / "bad4.cfg",
                      "scenario = empirical_sensitivity\ndataset = x.csv\neffect_priors = normal(0,1)\nhet_priors =\n");
        CHECK(config_error([&] { run_scenario_file(dir / "bad4.cfg", dir / "x"); }));
        CHECK(config_error([&] { run_scenario_file(dir / "missing.cfg", dir / "x"); }));
    }
}

// Sensitivity values for the empirical data sets; skipped unless present.
TEST_CASE("empirical sensitivity values") {
    const auto data = testing::source_dir() / "data";
    if (!std::filesystem::exists(data / "lammertink2017.csv") || !std::filesystem::exists(data / "mcneely2010.csv")) {
        MESSAGE("skipped: empirical data sets not present");
        return;
    }
    auto lam = sort_by_year(read_dataset_csv(data / "lammertink2017.csv", Scale::SMD));
    CHECK(std::abs(bf_re(lam, EffectPrior::normal(0, 1), HeterogeneityPrior::uniform_tau2()).bf10 / 141.090 - 1) <
          0.05);
    CHECK(std::abs(bf_re(lam, EffectPrior::normal(0, 0.5), HeterogeneityPrior::berger_deely()).bf10 / 178.242 - 1) <
          0.05);
    auto mc = read_dataset_csv(data / "mcneely2010.csv", Scale::LogOdds);
    CHECK(std::abs(bf_marema(mc, EffectPrior::student_t(0, 2.35, 13), HeterogeneityPrior::uniform_tau()).bf10 /
                       0.359 -
                   1) < 0.05);
}

}  // TEST_SUITE
