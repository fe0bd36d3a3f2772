#include "bfmeta/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "bfmeta/config.hpp"
#include "bfmeta/error.hpp"
#include "bfmeta/generate.hpp"
#include "bfmeta/parallel.hpp"

namespace bfmeta {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigParse, msg); }

void check_common(std::size_t reps, std::size_t min_reps, double lo, double hi) {
    if (reps < min_reps) fail("reps must be at least " + std::to_string(min_reps));
    if (!(lo > 0.0) || !(hi > lo)) fail("sigma range needs 0 < low < high");
}

template <class T>
void check_nonempty(const std::vector<T>& v, const char* what) {
    if (v.empty()) fail(std::string(what) + " grid is empty");
}

nlohmann::ordered_json nullable(double x) {
    return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

std::string na_or(double x) { return std::isnan(x) ? "NA" : format_double(x); }

double median_of(std::vector<double> x) { return sample_quantile(std::move(x), 0.5); }

}  // namespace

std::string_view to_string(Scenario s) noexcept {
    switch (s) {
        case Scenario::PriorRobustness: return "prior_robustness";
        case Scenario::Illustration: return "illustration";
        case Scenario::EvalueGrid: return "evalue_grid";
        case Scenario::EmpiricalSensitivity: return "empirical_sensitivity";
    }
    return "unknown";
}

Scenario parse_scenario(std::string_view text) {
    for (auto s : {Scenario::PriorRobustness, Scenario::Illustration, Scenario::EvalueGrid,
                   Scenario::EmpiricalSensitivity}) {
        if (text == to_string(s)) return s;
    }
    fail("unknown scenario '" + std::string(text) + "'");
}

double sample_quantile(std::vector<double> x, double p) {
    std::erase_if(x, [](double v) { return std::isnan(v); });
    if (x.empty()) return kNaN;
    std::sort(x.begin(), x.end());
    const double h = (static_cast<double>(x.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

// ---------------------------------------------------------------------------
// prior robustness

void validate(const PriorRobustnessConfig& cfg) {
    check_nonempty(cfg.ks, "k");
    check_nonempty(cfg.mus, "mu");
    check_nonempty(cfg.taus, "tau");
    check_nonempty(cfg.het_priors, "heterogeneity prior");
    check_common(cfg.reps, 50, cfg.sigma_lo, cfg.sigma_hi);
    for (double t : cfg.taus) {
        if (!(t >= 0.0)) fail("tau values must be non-negative");
    }
}

std::vector<QuantileCell> run_prior_robustness(const PriorRobustnessConfig& cfg) {
    validate(cfg);
    const std::size_t nk = cfg.ks.size(), nm = cfg.mus.size(), nt = cfg.taus.size();
    const std::size_t np = cfg.het_priors.size();
    const std::size_t ncell = nk * nm * nt;
    // results[cell * np + prior][rep]
    std::vector<std::vector<double>> results(ncell * np, std::vector<double>(cfg.reps, kNaN));

    parallel_for(
        ncell * cfg.reps,
        [&](std::size_t job) {
            const std::size_t cell = job / cfg.reps, r = job % cfg.reps;
            const std::size_t ki = cell / (nm * nt), mi = (cell / nt) % nm, ti = cell % nt;
            RngStream rng(cfg.seed, {ki, mi, ti, r});
            const auto d = simulate_meta_dataset(cfg.ks[ki], cfg.mus[mi], cfg.taus[ti], cfg.sigma_lo, cfg.sigma_hi, rng);
            for (std::size_t p = 0; p < np; ++p) {
                try {
                    results[cell * np + p][r] = bf_re(d, cfg.effect, cfg.het_priors[p]).log_bf10;
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::Numerical) throw;
                }
            }
        },
        cfg.threads);

    std::vector<QuantileCell> out;
    out.reserve(ncell * np);
    for (std::size_t cell = 0; cell < ncell; ++cell) {
        const std::size_t ki = cell / (nm * nt), mi = (cell / nt) % nm, ti = cell % nt;
        for (std::size_t p = 0; p < np; ++p) {
            QuantileCell q;
            q.k = cfg.ks[ki];
            q.mu = cfg.mus[mi];
            q.tau = cfg.taus[ti];
            q.prior = short_name(cfg.het_priors[p]);
            q.log_bf10 = std::move(results[cell * np + p]);
            q.failures = static_cast<std::size_t>(
                std::count_if(q.log_bf10.begin(), q.log_bf10.end(), [](double v) { return std::isnan(v); }));
            q.reps = cfg.reps - q.failures;
            q.q05 = sample_quantile(q.log_bf10, 0.05);
            q.q50 = sample_quantile(q.log_bf10, 0.50);
            q.q95 = sample_quantile(q.log_bf10, 0.95);
            out.push_back(std::move(q));
        }
    }
    return out;
}

void write_quantiles_csv(const std::vector<QuantileCell>& cells, std::ostream& out) {
    out << "k,mu,tau,prior,reps,failures,q05,q50,q95\n";
    for (const auto& c : cells) {
        out << c.k << ',' << format_double(c.mu) << ',' << format_double(c.tau) << ',' << csv_field(c.prior) << ','
            << c.reps << ',' << c.failures << ',' << na_or(c.q05) << ',' << na_or(c.q50) << ',' << na_or(c.q95)
            << '\n';
    }
}

// ---------------------------------------------------------------------------
// illustration

void validate(const IllustrationConfig& cfg) {
    if (cfg.k < 3) fail("illustration needs k >= 3");
    check_nonempty(cfg.taus, "tau");
    check_common(cfg.reps, 50, cfg.sigma_lo, cfg.sigma_hi);
    for (double t : cfg.taus) {
        if (!(t >= 0.0)) fail("tau values must be non-negative");
    }
    try {
        require_proper(cfg.bma_het);
    } catch (const Error& e) {
        fail(e.what());
    }
}

std::vector<IllustrationRow> run_illustration(const IllustrationConfig& cfg) {
    validate(cfg);
    const std::size_t nt = cfg.taus.size(), nmod = kIllustrationModels.size();
    // per tau: [model][rep] log B01, plus Pr(RE) and Pr(tau^2 > 0) per rep
    std::vector<std::vector<std::vector<double>>> bf01(nt, std::vector<std::vector<double>>(nmod));
    std::vector<std::vector<double>> pr_re(nt, std::vector<double>(cfg.reps, kNaN));
    std::vector<std::vector<double>> pr_pos(nt, std::vector<double>(cfg.reps, kNaN));
    for (auto& per_tau : bf01) {
        for (auto& v : per_tau) v.assign(cfg.reps, kNaN);
    }

    parallel_for(
        nt * cfg.reps,
        [&](std::size_t job) {
            const std::size_t ti = job / cfg.reps, r = job % cfg.reps;
            RngStream rng(cfg.seed, {ti, r});
            const auto d = simulate_meta_dataset(cfg.k, cfg.mu, cfg.taus[ti], cfg.sigma_lo, cfg.sigma_hi, rng);
            for (std::size_t m = 0; m < nmod; ++m) {
                try {
                    EvidenceReport rep;
                    switch (kIllustrationModels[m]) {
                        case ModelKind::CE: rep = bf_ce(d, cfg.effect); break;
                        case ModelKind::FE: rep = bf_fe_product(d, cfg.effect); break;
                        case ModelKind::RE: rep = bf_re(d, cfg.effect, cfg.het); break;
                        case ModelKind::Marema:
                            rep = bf_marema(d, cfg.effect, cfg.het);
                            pr_pos[ti][r] = rep.pr_tau2_pos.value_or(kNaN);
                            break;
                        case ModelKind::BMA:
                            rep = bf_bma(d, cfg.effect, cfg.bma_het);
                            pr_re[ti][r] = rep.pr_re.value_or(kNaN);
                            break;
                    }
                    bf01[ti][m][r] = -rep.log_bf10;
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::Numerical) throw;
                }
            }
        },
        cfg.threads);

    std::vector<IllustrationRow> out;
    for (std::size_t ti = 0; ti < nt; ++ti) {
        IllustrationRow row;
        row.tau = cfg.taus[ti];
        row.reps = cfg.reps;
        for (std::size_t m = 0; m < nmod; ++m) {
            const auto& v = bf01[ti][m];
            row.failures[m] =
                static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }));
            row.median_log_bf01[m] = median_of(v);
        }
        row.median_pr_re = median_of(pr_re[ti]);
        row.median_pr_tau2_pos = median_of(pr_pos[ti]);
        out.push_back(row);
    }
    return out;
}

void write_illustration_csv(const std::vector<IllustrationRow>& rows, std::ostream& out) {
    out << "tau,reps";
    for (auto m : kIllustrationModels) out << ",median_log_bf01_" << to_string(m);
    for (auto m : kIllustrationModels) out << ",failures_" << to_string(m);
    out << ",median_pr_re,median_pr_tau2_pos\n";
    for (const auto& r : rows) {
        out << format_double(r.tau) << ',' << r.reps;
        for (double v : r.median_log_bf01) out << ',' << na_or(v);
        for (auto f : r.failures) out << ',' << f;
        out << ',' << na_or(r.median_pr_re) << ',' << na_or(r.median_pr_tau2_pos) << '\n';
    }
}

// ---------------------------------------------------------------------------
// e-value grid

void validate(const EvalueGridConfig& cfg) {
    check_nonempty(cfg.ks, "k");
    check_nonempty(cfg.taus, "tau");
    check_nonempty(cfg.models, "model");
    check_nonempty(cfg.effect_priors, "effect prior");
    check_common(cfg.reps, 100, cfg.sigma_lo, cfg.sigma_hi);
    for (auto m : cfg.models) {
        if (m == ModelKind::BMA) fail("the e-value grid covers CE, FE, RE and marema");
        if ((m == ModelKind::RE || m == ModelKind::Marema) && cfg.het_priors.empty()) {
            fail("heterogeneity prior grid is empty");
        }
    }
}

std::vector<EvalueCheckResult> run_evalue_grid(const EvalueGridConfig& cfg) {
    validate(cfg);
    std::vector<EvalueCheckConfig> cells;
    const bool label_effect = cfg.effect_priors.size() > 1;
    for (auto model : cfg.models) {
        const bool random_effects = model == ModelKind::RE || model == ModelKind::Marema;
        for (const auto& effect : cfg.effect_priors) {
            const std::size_t nh = random_effects ? cfg.het_priors.size() : 1;
            for (std::size_t h = 0; h < nh; ++h) {
                for (std::size_t ki = 0; ki < cfg.ks.size(); ++ki) {
                    const std::size_t ntau = random_effects ? cfg.taus.size() : 1;
                    for (std::size_t ti = 0; ti < ntau; ++ti) {
                        EvalueCheckConfig c;
                        c.k = cfg.ks[ki];
                        c.tau = random_effects ? cfg.taus[ti] : 0.0;
                        c.sigma_lo = cfg.sigma_lo;
                        c.sigma_hi = cfg.sigma_hi;
                        c.model = model;
                        c.effect = effect;
                        if (random_effects) c.het = cfg.het_priors[h];
                        c.reps = cfg.reps;
                        // data sets are shared by every prior and model at the same (k, tau)
                        c.seed = derive_seed(cfg.seed, {ki, random_effects ? ti : 0});
                        c.threads = cfg.threads;
                        std::string label = random_effects ? short_name(cfg.het_priors[h]) : std::string("none");
                        if (label_effect) label = short_name(effect) + "|" + label;
                        c.prior_label = label;
                        cells.push_back(std::move(c));
                    }
                }
            }
        }
    }
    std::vector<EvalueCheckResult> out;
    out.reserve(cells.size());
    for (const auto& c : cells) out.push_back(expected_bf_under_null_mc(c));
    return out;
}

// ---------------------------------------------------------------------------
// empirical sensitivity

std::vector<SensitivityRow> run_sensitivity(const Dataset& d, const SensitivityConfig& cfg) {
    if (cfg.effect_priors.empty() || cfg.het_priors.empty()) fail("prior matrix is empty");
    if (cfg.models.empty()) fail("no models requested");
    std::vector<SensitivityRow> rows;
    for (auto model : cfg.models) {
        for (const auto& e : cfg.effect_priors) {
            for (const auto& h : cfg.het_priors) {
                ModelSpec m;
                m.kind = model;
                m.effect_prior = e;
                m.het_prior = h;
                rows.push_back({e, h, evaluate(d, m, cfg.prior_odds)});
            }
        }
    }
    return rows;
}

void write_sensitivity_csv(const std::vector<SensitivityRow>& rows, std::ostream& out) {
    out << "model,effect_prior,het_prior,bf10,log_bf10,php_h1,pr_tau2_pos,pr_re\n";
    for (const auto& r : rows) {
        out << to_string(r.report.model) << ',' << csv_field(short_name(r.effect)) << ','
            << csv_field(short_name(r.het)) << ',' << format_double(r.report.bf10) << ','
            << format_double(r.report.log_bf10) << ',' << format_double(r.report.php_h1) << ','
            << (r.report.pr_tau2_pos ? format_double(*r.report.pr_tau2_pos) : "NA") << ','
            << (r.report.pr_re ? format_double(*r.report.pr_re) : "NA") << '\n';
    }
}

// ---------------------------------------------------------------------------
// scenario files

namespace {

std::vector<ModelKind> parse_models(std::string_view text) {
    std::vector<ModelKind> out;
    for (const auto& piece : split_top_level(text)) {
        try {
            out.push_back(parse_model(piece));
        } catch (const Error& e) {
            fail(e.what());
        }
    }
    return out;
}

std::pair<double, double> parse_sigma_range(const KeyValueFile& f) {
    if (!f.has("sigma")) return {0.2, 0.8};
    const auto v = parse_number_list(f.require("sigma"), "sigma");
    if (v.size() != 2) fail("sigma expects 'low, high'");
    return {v[0], v[1]};
}

std::size_t scenario_reps(const KeyValueFile& f, const ScenarioOptions& opt, std::size_t desk, std::size_t paper) {
    if (opt.paper_scale) return f.has("paper_reps") ? parse_count(f.require("paper_reps"), "paper_reps") : paper;
    return f.has("reps") ? parse_count(f.require("reps"), "reps") : desk;
}

class Bundle {
public:
    Bundle(std::filesystem::path dir, ScenarioResult& result) : dir_(std::move(dir)), result_(result) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir_.string());
    }

    template <class Writer>
    void write(const std::string& name, Writer&& w) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
        w(out);
        result_.files.push_back(path);
    }

private:
    std::filesystem::path dir_;
    ScenarioResult& result_;
};

nlohmann::ordered_json to_json(const QuantileCell& c) {
    return {{"k", c.k},         {"mu", c.mu},           {"tau", c.tau},         {"prior", c.prior},
            {"reps", c.reps},   {"failures", c.failures}, {"q05", nullable(c.q05)}, {"q50", nullable(c.q50)},
            {"q95", nullable(c.q95)}};
}

nlohmann::ordered_json to_json(const EvalueCheckResult& r) {
    return {{"k", r.k},
            {"tau", r.tau},
            {"prior", r.prior},
            {"model", std::string(to_string(r.model))},
            {"reps", r.reps},
            {"failures", r.failures},
            {"mean_bf", nullable(r.mean_bf)},
            {"mc_se", nullable(r.mc_se)},
            {"verdict", std::string(to_string(r.verdict))},
            {"flagged", r.flagged}};
}

void run_robustness_file(const KeyValueFile& f, const ScenarioOptions& opt, std::uint64_t seed, Bundle& out,
                         ScenarioResult& result) {
    f.reject_unknown({"scenario", "seed", "reps", "paper_reps", "sigma", "k", "mu", "tau", "het_priors",
                      "effect_prior"});
    PriorRobustnessConfig cfg;
    if (f.has("k")) cfg.ks = parse_count_list(f.require("k"), "k");
    if (f.has("mu")) cfg.mus = parse_number_list(f.require("mu"), "mu");
    if (f.has("tau")) cfg.taus = parse_number_list(f.require("tau"), "tau");
    if (f.has("het_priors")) cfg.het_priors = parse_het_prior_list(f.require("het_priors"));
    if (f.has("effect_prior")) cfg.effect = parse_effect_prior(f.require("effect_prior"), Scale::SMD);
    std::tie(cfg.sigma_lo, cfg.sigma_hi) = parse_sigma_range(f);
    cfg.reps = scenario_reps(f, opt, 200, 2000);
    cfg.seed = seed;
    cfg.threads = opt.threads;
    const auto cells = run_prior_robustness(cfg);

    for (const auto& c : cells) {
        const std::string name = "scenario_cell_" + std::to_string(c.k) + "_" + format_double(c.mu) + "_" +
                                 format_double(c.tau) + "_" + file_slug(c.prior) + ".csv";
        out.write(name, [&](std::ostream& os) {
            os << "rep,log_bf10\n";
            for (std::size_t r = 0; r < c.log_bf10.size(); ++r) os << r << ',' << na_or(c.log_bf10[r]) << '\n';
        });
    }
    out.write("quantiles.csv", [&](std::ostream& os) { write_quantiles_csv(cells, os); });
    result.summary["reps"] = cfg.reps;
    result.summary["effect_prior"] = short_name(cfg.effect);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : cells) arr.push_back(to_json(c));
    result.summary["cells"] = arr;
}

void run_illustration_file(const KeyValueFile& f, const ScenarioOptions& opt, std::uint64_t seed, Bundle& out,
                           ScenarioResult& result) {
    f.reject_unknown({"scenario", "seed", "reps", "paper_reps", "sigma", "k", "mu", "tau", "effect_prior", "het_prior",
                      "bma_het_prior"});
    IllustrationConfig cfg;
    if (f.has("k")) cfg.k = parse_count(f.require("k"), "k");
    if (f.has("mu")) cfg.mu = parse_number(f.require("mu"), "mu");
    if (f.has("tau")) cfg.taus = parse_number_list(f.require("tau"), "tau");
    if (f.has("effect_prior")) cfg.effect = parse_effect_prior(f.require("effect_prior"), Scale::SMD);
    if (f.has("het_prior")) cfg.het = parse_het_prior(f.require("het_prior"));
    if (f.has("bma_het_prior")) cfg.bma_het = parse_het_prior(f.require("bma_het_prior"));
    std::tie(cfg.sigma_lo, cfg.sigma_hi) = parse_sigma_range(f);
    cfg.reps = scenario_reps(f, opt, 500, 2000);
    cfg.seed = seed;
    cfg.threads = opt.threads;
    const auto rows = run_illustration(cfg);

    out.write("illustration.csv", [&](std::ostream& os) { write_illustration_csv(rows, os); });
    result.summary["reps"] = cfg.reps;
    result.summary["k"] = cfg.k;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["tau"] = r.tau;
        nlohmann::ordered_json med, fails;
        for (std::size_t m = 0; m < kIllustrationModels.size(); ++m) {
            med[std::string(to_string(kIllustrationModels[m]))] = nullable(r.median_log_bf01[m]);
            fails[std::string(to_string(kIllustrationModels[m]))] = r.failures[m];
        }
        j["median_log_bf01"] = med;
        j["failures"] = fails;
        j["median_pr_re"] = nullable(r.median_pr_re);
        j["median_pr_tau2_pos"] = nullable(r.median_pr_tau2_pos);
        arr.push_back(j);
    }
    result.summary["rows"] = arr;
}

void run_evalue_file(const KeyValueFile& f, const ScenarioOptions& opt, std::uint64_t seed, Bundle& out,
                     ScenarioResult& result) {
    f.reject_unknown({"scenario", "seed", "reps", "paper_reps", "sigma", "k", "tau", "models", "het_priors",
                      "effect_priors"});
    EvalueGridConfig cfg;
    if (f.has("k")) cfg.ks = parse_count_list(f.require("k"), "k");
    if (f.has("tau")) cfg.taus = parse_number_list(f.require("tau"), "tau");
    if (f.has("models")) cfg.models = parse_models(f.require("models"));
    if (f.has("het_priors")) cfg.het_priors = parse_het_prior_list(f.require("het_priors"));
    if (f.has("effect_priors")) cfg.effect_priors = parse_effect_prior_list(f.require("effect_priors"), Scale::SMD);
    std::tie(cfg.sigma_lo, cfg.sigma_hi) = parse_sigma_range(f);
    cfg.reps = scenario_reps(f, opt, 1000, 10000);
    cfg.seed = seed;
    cfg.threads = opt.threads;
    const auto rows = run_evalue_grid(cfg);

    out.write("evalue.csv", [&](std::ostream& os) { write_evalue_csv(rows, os); });
    result.summary["reps"] = cfg.reps;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    result.summary["cells"] = arr;
}

void run_sensitivity_file(const KeyValueFile& f, Bundle& out, ScenarioResult& result) {
    f.reject_unknown({"scenario", "dataset", "scale", "order", "models", "effect_priors", "het_priors", "prior_odds"});
    SensitivityConfig cfg;
    cfg.dataset = f.require("dataset");
    if (cfg.dataset.is_relative()) cfg.dataset = f.base_dir() / cfg.dataset;
    try {
        cfg.scale = parse_scale(f.get("scale").value_or("smd"));
    } catch (const Error& e) {
        fail(e.what());
    }
    const std::string order = f.get("order").value_or("given");
    if (order != "given" && order != "year") fail("order must be 'given' or 'year'");
    cfg.order_by_year = order == "year";
    if (f.has("models")) cfg.models = parse_models(f.require("models"));
    cfg.effect_priors = parse_effect_prior_list(f.require("effect_priors"), cfg.scale);
    cfg.het_priors = parse_het_prior_list(f.require("het_priors"));
    if (f.has("prior_odds")) cfg.prior_odds = parse_number(f.require("prior_odds"), "prior_odds");
    if (!(cfg.prior_odds > 0.0)) fail("prior_odds must be positive");

    auto d = read_dataset_csv(cfg.dataset, cfg.scale);
    if (cfg.order_by_year) d = sort_by_year(d);
    const auto rows = run_sensitivity(d, cfg);

    out.write("sensitivity.csv", [&](std::ostream& os) { write_sensitivity_csv(rows, os); });
    result.summary["dataset"] = cfg.dataset.filename().string();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        auto j = bfmeta::to_json(r.report);
        j["effect_prior_spec"] = short_name(r.effect);
        j["het_prior_spec"] = short_name(r.het);
        arr.push_back(j);
    }
    result.summary["reports"] = arr;
}

}  // namespace

ScenarioResult run_scenario_file(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                                 const ScenarioOptions& opt) {
    const auto f = KeyValueFile::load(path);
    ScenarioResult result;
    result.scenario = parse_scenario(f.require("scenario"));
    std::uint64_t seed = 1;
    if (f.has("seed")) seed = parse_count(f.require("seed"), "seed");
    if (opt.seed) seed = *opt.seed;

    result.summary["scenario"] = std::string(to_string(result.scenario));
    if (result.scenario != Scenario::EmpiricalSensitivity) {
        result.summary["seed"] = seed;
        result.summary["paper_scale"] = opt.paper_scale;
    }
    Bundle bundle(out_dir, result);
    switch (result.scenario) {
        case Scenario::PriorRobustness: run_robustness_file(f, opt, seed, bundle, result); break;
        case Scenario::Illustration: run_illustration_file(f, opt, seed, bundle, result); break;
        case Scenario::EvalueGrid: run_evalue_file(f, opt, seed, bundle, result); break;
        case Scenario::EmpiricalSensitivity: run_sensitivity_file(f, bundle, result); break;
    }
    bundle.write("summary.json", [&](std::ostream& os) { os << result.summary.dump(2) << '\n'; });
    return result;
}

}  // namespace bfmeta
