#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bfmeta/error.hpp"
#include "bfmeta/evalue.hpp"
#include "helpers.hpp"

using namespace bfmeta;

TEST_SUITE("evalue") {

TEST_CASE("safe rejection") {
    auto a = safe_reject(22.0, 0.05);
    CHECK(a.reject);
    CHECK(a.threshold == doctest::Approx(20.0));
    CHECK_FALSE(safe_reject(19.9, 0.05).reject);
    CHECK(safe_reject(1000.0, 0.001).reject);
    CHECK(safe_reject(20.0, 0.05).reject);
    CHECK_FALSE(a.note.empty());
    for (double alpha : {0.0, 1.0, -0.1, 2.0}) {
        try {
            safe_reject(10.0, alpha);
            FAIL("expected InvalidAlpha");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidAlpha);
        }
    }
    CHECK_THROWS_AS(safe_reject(0.0, 0.05), Error);
}

TEST_CASE("decisions are monotone in alpha and match p_E") {
    RngStream rng(1);
    for (int rep = 0; rep < 2000; ++rep) {
        const double bf = std::exp(rng.uniform(-5.0, 10.0));
        const double a1 = rng.uniform(1e-4, 0.999);
        const double a2 = rng.uniform(a1, 0.9999);
        const auto d1 = safe_reject(bf, a1);
        if (d1.reject) CHECK(safe_reject(bf, a2).reject);
        CHECK(d1.p_e == 1.0 / bf);
        CHECK(d1.reject == (d1.p_e <= a1));
    }
}

TEST_CASE("verdict bands") {
    CHECK(classify_mean(0.98, 0.05) == Verdict::Satisfied);
    CHECK(classify_mean(1.0, 0.0) == Verdict::Satisfied);
    CHECK(classify_mean(1.1, 0.05) == Verdict::Borderline);
    CHECK(classify_mean(1.2, 0.05) == Verdict::Violated);
    CHECK(to_string(Verdict::Violated) == "violated");
}

TEST_CASE("null expectation of the Bayes factor") {
    EvalueCheckConfig cfg;
    cfg.k = 3;
    cfg.reps = 400;
    cfg.seed = 17;
    cfg.effect = EffectPrior::normal(0, 0.1);
    cfg.prior_label = "n";
    auto r = expected_bf_under_null_mc(cfg);
    CHECK(r.reps + r.failures == 400);
    CHECK(r.mean_bf > 0.0);
    CHECK(std::abs(r.mean_bf - 1.0) <= 4 * r.mc_se);

    cfg.threads = 4;
    auto again = expected_bf_under_null_mc(cfg);
    CHECK(again.mean_bf == r.mean_bf);
    CHECK(again.bf10 == r.bf10);

    std::ostringstream os;
    write_evalue_csv({r}, os);
    CHECK(os.str().rfind("k,tau,prior,model,reps,mean_bf,mc_se,verdict\n3,0,n,", 0) == 0);

    cfg.reps = 50;
    CHECK_THROWS_AS(expected_bf_under_null_mc(cfg), Error);
    cfg.reps = 200;
    cfg.model = ModelKind::BMA;
    CHECK_THROWS_AS(expected_bf_under_null_mc(cfg), Error);
}

TEST_CASE("replications are independent of the rep count") {
    EvalueCheckConfig cfg;
    cfg.model = ModelKind::RE;
    cfg.het = HeterogeneityPrior::inverse_gamma_tau(1, 0.15);
    cfg.tau = 0.5;
    cfg.k = 3;
    cfg.reps = 100;
    auto small = expected_bf_under_null_mc(cfg);
    cfg.reps = 150;
    auto big = expected_bf_under_null_mc(cfg);
    for (std::size_t r = 0; r < 100; ++r) CHECK(small.bf10[r] == big.bf10[r]);
}

TEST_CASE("reciprocal p keeps growing") {
    auto pts = reciprocal_p_demo({10, 100, 1000}, 3);
    REQUIRE(pts.size() == 3);
    CHECK(pts[2].reps == 1000);
    CHECK(pts[0].mean_inverse_p >= 1.0);
}

}  // TEST_SUITE
