#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfmeta/evalue.hpp"
#include "bfmeta/marginals.hpp"
#include "bfmeta/priors.hpp"
#include "bfmeta/synthesis.hpp"

namespace bfmeta {

enum class Scenario { PriorRobustness, Illustration, EvalueGrid, EmpiricalSensitivity };

std::string_view to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view text);

// Factorial RE design: for every (k, mu, tau) cell, `reps` data sets are
// generated once and analysed under every heterogeneity prior.
struct PriorRobustnessConfig {
    std::vector<std::size_t> ks{3, 8, 20};
    std::vector<double> mus{0.0, 0.2, 0.5, 1.0};
    std::vector<double> taus{0.1, 0.5, 2.0};
    std::vector<HeterogeneityPrior> het_priors{HeterogeneityPrior::uniform_tau2(), HeterogeneityPrior::uniform_tau(),
                                               HeterogeneityPrior::berger_deely(),
                                               HeterogeneityPrior::inverse_gamma_tau(1.0, 0.15)};
    EffectPrior effect = EffectPrior::normal(0.0, 1.0);
    double sigma_lo = 0.2;
    double sigma_hi = 0.8;
    std::size_t reps = 200;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct QuantileCell {
    std::size_t k = 0;
    double mu = 0.0;
    double tau = 0.0;
    std::string prior;         // short_name of the heterogeneity prior
    std::size_t reps = 0;      // successful replications
    std::size_t failures = 0;
    double q05 = 0.0, q50 = 0.0, q95 = 0.0;  // of log B10; NaN if every replication failed
    std::vector<double> log_bf10;            // per replication, NaN for failures
};

// Throws ConfigParse for empty grids, reps < 50 or a bad sigma range.
void validate(const PriorRobustnessConfig& cfg);

// Cells ordered by k, mu, tau, prior. Numerical failures are counted per cell.
std::vector<QuantileCell> run_prior_robustness(const PriorRobustnessConfig& cfg);

// Linear-interpolation sample quantile (the usual "type 7"); NaNs are skipped.
double sample_quantile(std::vector<double> x, double p);

struct IllustrationConfig {
    std::size_t k = 10;
    double mu = 0.0;
    std::vector<double> taus{0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
    EffectPrior effect = EffectPrior::normal(0.0, 1.0);
    HeterogeneityPrior het = HeterogeneityPrior::berger_deely();                // RE and marema
    HeterogeneityPrior bma_het = HeterogeneityPrior::inverse_gamma_tau(1.0, 0.15);  // BMA
    double sigma_lo = 0.2;
    double sigma_hi = 0.8;
    std::size_t reps = 500;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

inline constexpr std::array<ModelKind, 5> kIllustrationModels{ModelKind::CE, ModelKind::FE, ModelKind::RE,
                                                              ModelKind::Marema, ModelKind::BMA};

struct IllustrationRow {
    double tau = 0.0;
    std::size_t reps = 0;
    std::array<double, 5> median_log_bf01{};  // in kIllustrationModels order
    std::array<std::size_t, 5> failures{};
    double median_pr_re = 0.0;        // BMA
    double median_pr_tau2_pos = 0.0;  // marema
};

void validate(const IllustrationConfig& cfg);
std::vector<IllustrationRow> run_illustration(const IllustrationConfig& cfg);

struct EvalueGridConfig {
    std::vector<std::size_t> ks{3, 8, 20};
    std::vector<double> taus{0.01, 0.2, 0.5, 1.0, 2.0, 3.0, 4.0};
    std::vector<ModelKind> models{ModelKind::RE};
    std::vector<HeterogeneityPrior> het_priors{HeterogeneityPrior::uniform_tau2(), HeterogeneityPrior::uniform_tau(),
                                               HeterogeneityPrior::berger_deely(),
                                               HeterogeneityPrior::inverse_gamma_tau(1.0, 0.15)};
    std::vector<EffectPrior> effect_priors{EffectPrior::normal(0.0, 1.0)};
    double sigma_lo = 0.2;
    double sigma_hi = 0.8;
    std::size_t reps = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

void validate(const EvalueGridConfig& cfg);

// Rows ordered by model, effect prior, heterogeneity prior, k, tau. CE and FE
// ignore the heterogeneity priors and the tau grid (one row per k).
std::vector<EvalueCheckResult> run_evalue_grid(const EvalueGridConfig& cfg);

// Every model under every (effect prior, heterogeneity prior) pair on one data set.
struct SensitivityConfig {
    std::filesystem::path dataset;
    Scale scale = Scale::SMD;
    bool order_by_year = false;
    std::vector<ModelKind> models{ModelKind::RE, ModelKind::Marema};
    std::vector<EffectPrior> effect_priors;
    std::vector<HeterogeneityPrior> het_priors;
    double prior_odds = 1.0;
};

struct SensitivityRow {
    EffectPrior effect;
    HeterogeneityPrior het;
    EvidenceReport report;
};

// Throws ConfigParse when either prior list is empty.
std::vector<SensitivityRow> run_sensitivity(const Dataset& d, const SensitivityConfig& cfg);

struct ScenarioOptions {
    bool paper_scale = false;             // 2000 / 2000 / 10000 replications
    std::optional<std::uint64_t> seed;    // overrides the file's seed
    unsigned threads = 0;
};

struct ScenarioResult {
    Scenario scenario = Scenario::PriorRobustness;
    std::vector<std::filesystem::path> files;  // written, in creation order
    nlohmann::ordered_json summary;
};

// Parses a scenario file, runs it and writes its CSV/JSON bundle into out_dir.
// Throws ConfigParse for malformed files; other errors propagate.
ScenarioResult run_scenario_file(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                                 const ScenarioOptions& opt = {});

// CSV writers used by the bundle.
void write_quantiles_csv(const std::vector<QuantileCell>& cells, std::ostream& out);
void write_illustration_csv(const std::vector<IllustrationRow>& rows, std::ostream& out);
void write_sensitivity_csv(const std::vector<SensitivityRow>& rows, std::ostream& out);

}  // namespace bfmeta
