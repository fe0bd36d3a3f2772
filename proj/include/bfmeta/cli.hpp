#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bfmeta/data.hpp"
#include "bfmeta/marginals.hpp"

namespace bfmeta::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kDataError = 3, kNumericalError = 4 };

enum class Order { Given, Year };

struct RunConfig {
    std::filesystem::path dataset;
    Scale scale = Scale::SMD;
    std::vector<ModelKind> models{ModelKind::CE, ModelKind::RE, ModelKind::FE, ModelKind::Marema, ModelKind::BMA};
    std::string effect_prior = "default";
    std::string het_prior = "default";    // RE and marema
    std::optional<std::string> bma_het_prior;  // defaults to ig_tau(1,0.15) unless het_prior was set explicitly
    double prior_odds = 1.0;
    std::vector<double> alphas{0.1, 0.05, 0.01, 0.001};
    Order order = Order::Given;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 1;
    bool paper_scale = false;
    std::optional<std::filesystem::path> dump_integrand;
};

// Flat config file with keys dataset, scale, models, effect_prior, het_prior,
// bma_het_prior, prior_odds, alpha, order, out, seed. Relative paths resolve
// against the file's directory.
RunConfig load_run_config(const std::filesystem::path& path);

// Throws ConfigParse for an empty model list or alpha outside (0,1).
void validate(const RunConfig& cfg);

// Heterogeneity prior each model is run with.
ModelSpec model_spec(const RunConfig& cfg, ModelKind kind);

// report.json and report.md in cfg.out_dir.
void cmd_analyze(const RunConfig& cfg, std::ostream& log);

// trajectory_<model>.csv per model plus crossings.csv and sequential.json.
void cmd_sequential(const RunConfig& cfg, std::ostream& log);

// forest.csv `id,year,y,ci_lo,ci_hi` with CE and RE summary rows; forest.svg
// when svg is set. estimation_sd adds a conjugate CE posterior row computed
// with a N(0, estimation_sd^2) prior, for display only.
void cmd_forest(const RunConfig& cfg, bool svg, std::optional<double> estimation_sd, std::ostream& log);

// Full command line (argv[0] is the program name). Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bfmeta::cli
