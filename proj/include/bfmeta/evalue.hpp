#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bfmeta/marginals.hpp"
#include "bfmeta/priors.hpp"

namespace bfmeta {

struct SafeDecision {
    double bf10 = 1.0;
    double alpha = 0.05;
    double threshold = 20.0;  // 1 / alpha
    double p_e = 1.0;         // 1 / bf10
    bool reject = false;
    std::string note;
};

// Reject H0 iff B10 >= 1/alpha. Throws InvalidAlpha unless alpha in (0,1),
// InvalidArgument unless B10 > 0.
SafeDecision safe_reject(double bf10, double alpha);

enum class Verdict { Satisfied, Borderline, Violated };
std::string_view to_string(Verdict v) noexcept;

// Satisfied: mean <= 1. Borderline: mean > 1 but within 3 mc-se of 1.
// Violated: mean - 3 mc-se > 1.
Verdict classify_mean(double mean, double mc_se) noexcept;

struct EvalueCheckConfig {
    std::size_t k = 5;
    double tau = 0.0;
    double sigma_lo = 0.2;
    double sigma_hi = 0.8;
    ModelKind model = ModelKind::CE;  // CE, FE, RE or Marema
    EffectPrior effect = EffectPrior::normal(0.0, 1.0);
    std::optional<HeterogeneityPrior> het;
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    std::string prior_label;  // column `prior` of the CSV
    unsigned threads = 0;
};

struct EvalueCheckResult {
    std::size_t k = 0;
    double tau = 0.0;
    std::string prior;
    ModelKind model = ModelKind::CE;
    std::size_t reps = 0;      // successful replications
    std::size_t failures = 0;  // replications with a numerical failure
    double mean_bf = 0.0;
    double mc_se = 0.0;
    Verdict verdict = Verdict::Satisfied;
    bool flagged = false;  // more than 1% failures
    std::vector<double> bf10;  // per replication, NaN for failures
};

// Mean B10 over data sets generated under H0 (global effect 0; study effects
// N(0, tau^2) where the model has them). Replication r uses the stream
// derived from (seed, r). Throws InvalidArgument when reps < 100.
EvalueCheckResult expected_bf_under_null_mc(const EvalueCheckConfig& cfg);

// CSV `k,tau,prior,model,reps,mean_bf,mc_se,verdict`.
void write_evalue_csv(const std::vector<EvalueCheckResult>& rows, std::ostream& out);

// Mean of 1/p for two-sided z-test p-values under H0 at growing replication
// counts. E[1/p] is infinite, so the running mean keeps growing.
struct ReciprocalPPoint {
    std::size_t reps = 0;
    double mean_inverse_p = 0.0;
};
std::vector<ReciprocalPPoint> reciprocal_p_demo(const std::vector<std::size_t>& checkpoints, std::uint64_t seed);

}  // namespace bfmeta
