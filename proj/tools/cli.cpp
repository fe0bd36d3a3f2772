#include "bfmeta/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfmeta/config.hpp"
#include "bfmeta/error.hpp"
#include "bfmeta/evalue.hpp"
#include "bfmeta/frequentist.hpp"
#include "bfmeta/simlab.hpp"
#include "bfmeta/synthesis.hpp"

namespace bfmeta::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigParse, msg); }

std::vector<ModelKind> parse_model_list(std::string_view text) {
    std::vector<ModelKind> out;
    for (const auto& piece : split_top_level(text)) {
        const auto m = parse_model(piece);
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    return out;
}

Order parse_order(std::string_view text) {
    if (text == "given") return Order::Given;
    if (text == "year") return Order::Year;
    fail("order must be 'given' or 'year', got '" + std::string(text) + "'");
}

std::string_view to_string(Order o) { return o == Order::Year ? "year" : "given"; }

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::string fmt_p(double p) { return p < 0.001 ? std::string("< 0.001") : fmt("%.3f", p); }

std::string fmt_bf(double x) { return (x >= 1e4 || x < 1e-3) ? fmt("%.3e", x) : fmt("%.3f", x); }

Dataset load_dataset(const RunConfig& cfg) {
    if (cfg.dataset.empty()) fail("no dataset given (use --dataset)");
    auto d = read_dataset_csv(cfg.dataset, cfg.scale);
    if (cfg.order == Order::Year) d = sort_by_year(d);
    return d;
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir.string());
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / name).string());
    return out;
}

nlohmann::ordered_json classical_json(const Dataset& d) {
    nlohmann::ordered_json j;
    if (d.k() >= 2) {
        j["q_test"] = to_json(cochran_q(d));
        j["ce"] = to_json(ce_estimate(d));
        j["re"] = to_json(re_estimate(d));
    } else {
        j["q_test"] = nullptr;
        j["ce"] = to_json(ce_estimate(d));
        j["re"] = nullptr;
    }
    return j;
}

std::string markdown_report(const RunConfig& cfg, const Dataset& d, const std::vector<EvidenceReport>& reports) {
    std::ostringstream md;
    md << "# Evidence report\n\n";
    md << "Dataset `" << cfg.dataset.filename().string() << "`: k = " << d.k() << ", scale " << to_string(d.scale())
       << ", order " << to_string(cfg.order) << ". Prior odds H1:H0 = " << format_double(cfg.prior_odds) << ".\n\n";
    md << "| Model | B10 | log B10 | B01 | P(H1 given data) | Evidence |\n";
    md << "|---|---|---|---|---|---|\n";
    for (const auto& r : reports) {
        md << "| " << bfmeta::to_string(r.model) << " | " << fmt_bf(r.bf10) << " | " << fmt("%.3f", r.log_bf10) << " | "
           << fmt_bf(r.bf01()) << " | " << fmt("%.3f", r.php_h1) << " | " << evidence_label(r.bf10) << " |\n";
    }
    md << "\n";
    for (const auto& r : reports) {
        md << "- " << bfmeta::to_string(r.model) << ": effect prior " << r.effect_prior;
        if (!r.het_prior.empty()) md << ", heterogeneity prior " << r.het_prior;
        if (r.pr_tau2_pos) md << "; Pr(tau^2 > 0 given data) = " << fmt("%.3f", *r.pr_tau2_pos);
        if (r.pr_re) md << "; Pr(RE given data) = " << fmt("%.3f", *r.pr_re);
        md << "\n";
    }
    md << "\nEvidence labels use the Kass-Raftery cut points 3, 20 and 150 and are annotations only.\n";

    md << "\n## Classical baseline\n\n";
    if (d.k() >= 2) {
        const auto q = cochran_q(d);
        md << "Q(" << q.df << ") = " << fmt("%.3f", q.q) << ", p = " << fmt_p(q.p) << "\n\n";
    }
    md << "| Model | Estimate | SE | z | p | tau^2 |\n|---|---|---|---|---|---|\n";
    auto row = [&](const ClassicalEstimate& e) {
        md << "| " << bfmeta::to_string(e.model) << " | " << fmt("%.3f", e.estimate) << " | " << fmt("%.3f", e.se)
           << " | " << fmt("%.3f", e.z) << " | " << fmt_p(e.p) << " | "
           << (e.tau2 ? fmt("%.4f", *e.tau2) + " (" + e.estimator + ")" : std::string("-")) << " |\n";
    };
    row(ce_estimate(d));
    if (d.k() >= 2) {
        const auto re = re_estimate(d);
        row(re);
        for (const auto& w : re.warnings) md << "\nWarning: " << w << "\n";
    }
    if (!d.warnings().empty()) {
        md << "\n";
        for (const auto& w : d.warnings()) md << "Note: " << w << "\n";
    }
    return md.str();
}

std::vector<double> thresholds_of(const RunConfig& cfg) {
    std::vector<double> t;
    for (double a : cfg.alphas) t.push_back(1.0 / a);
    return t;
}

// -- SVG ---------------------------------------------------------------------

struct ForestRow {
    std::string id;
    std::optional<int> year;
    double y, lo, hi;
};

std::string forest_svg(const std::vector<ForestRow>& rows) {
    double lo = 0.0, hi = 0.0;
    for (const auto& r : rows) {
        lo = std::min(lo, r.lo);
        hi = std::max(hi, r.hi);
    }
    if (hi - lo <= 0.0) hi = lo + 1.0;
    const double left = 160.0, width = 420.0, step = 22.0;
    const double height = step * (static_cast<double>(rows.size()) + 2.0);
    auto x = [&](double v) { return left + (v - lo) / (hi - lo) * width; };
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", left + width + 40.0) << "\" height=\""
      << fmt("%.0f", height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<line x1=\"" << fmt("%.2f", x(0.0)) << "\" y1=\"0\" x2=\"" << fmt("%.2f", x(0.0)) << "\" y2=\""
      << fmt("%.0f", height) << "\" stroke=\"#999\" stroke-dasharray=\"4\"/>\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double yy = step * (static_cast<double>(i) + 1.0);
        std::string label = r.id;
        for (auto [c, esc] : {std::pair{'&', "&amp;"}, std::pair{'<', "&lt;"}, std::pair{'>', "&gt;"}}) {
            std::string tmp;
            for (char ch : label) tmp += ch == c ? std::string(esc) : std::string(1, ch);
            label = tmp;
        }
        s << "<text x=\"4\" y=\"" << fmt("%.1f", yy + 4.0) << "\">" << label << "</text>\n";
        s << "<line x1=\"" << fmt("%.2f", x(r.lo)) << "\" y1=\"" << fmt("%.1f", yy) << "\" x2=\"" << fmt("%.2f", x(r.hi))
          << "\" y2=\"" << fmt("%.1f", yy) << "\" stroke=\"black\"/>\n";
        s << "<rect x=\"" << fmt("%.2f", x(r.y) - 3.0) << "\" y=\"" << fmt("%.1f", yy - 3.0)
          << "\" width=\"6\" height=\"6\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

// -- option plumbing --------------------------------------------------------

struct RawOptions {
    std::string config, dataset, scale, models, effect_prior, het_prior, bma_het_prior, alpha, order, out;
    double prior_odds = 1.0;
    std::uint64_t seed = 1;
    std::string dump;
    CLI::Option* prior_odds_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, RawOptions& o, bool models) {
    sub->add_option("--config", o.config, "Run configuration file");
    sub->add_option("--dataset", o.dataset, "CSV with columns id,year,y,se,n");
    sub->add_option("--scale", o.scale, "smd | log_odds | fisher_z | other");
    if (models) sub->add_option("--models", o.models, "Comma-separated subset of CE,RE,FE,marema,BMA");
    sub->add_option("--effect-prior", o.effect_prior, "e.g. default, normal(0,1), t(0,2.35,13)");
    sub->add_option("--het-prior", o.het_prior, "berger_deely | uniform_tau2 | uniform_tau | ig_tau(a,b)");
    sub->add_option("--bma-het-prior", o.bma_het_prior, "Proper heterogeneity prior for BMA");
    o.prior_odds_opt = sub->add_option("--prior-odds", o.prior_odds, "Prior odds of H1 against H0");
    sub->add_option("--alpha", o.alpha, "Comma-separated significance levels");
    sub->add_option("--order", o.order, "given | year");
    o.seed_opt = sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--out", o.out, "Output directory");
}

RunConfig resolve(const RawOptions& o, bool paper_scale) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
    if (!o.dataset.empty()) cfg.dataset = o.dataset;
    if (!o.scale.empty()) cfg.scale = parse_scale(o.scale);
    if (!o.models.empty()) cfg.models = parse_model_list(o.models);
    if (!o.effect_prior.empty()) cfg.effect_prior = o.effect_prior;
    if (!o.het_prior.empty()) cfg.het_prior = o.het_prior;
    if (!o.bma_het_prior.empty()) cfg.bma_het_prior = o.bma_het_prior;
    if (o.prior_odds_opt && o.prior_odds_opt->count() > 0) cfg.prior_odds = o.prior_odds;
    if (!o.alpha.empty()) cfg.alphas = parse_number_list(o.alpha, "alpha");
    if (!o.order.empty()) cfg.order = parse_order(o.order);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.seed_opt && o.seed_opt->count() > 0) cfg.seed = o.seed;
    if (!o.dump.empty()) cfg.dump_integrand = o.dump;
    cfg.paper_scale = paper_scale;
    validate(cfg);
    return cfg;
}

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::Config: return kConfigError;
        case ErrorKind::Data: return kDataError;
        case ErrorKind::Numerical: return kNumericalError;
    }
    return kNumericalError;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    const auto f = KeyValueFile::load(path);
    f.reject_unknown({"dataset", "scale", "models", "effect_prior", "het_prior", "bma_het_prior", "prior_odds", "alpha",
                      "order", "out", "seed"});
    RunConfig cfg;
    auto rel = [&](const std::string& p) {
        std::filesystem::path q = p;
        return q.is_relative() ? f.base_dir() / q : q;
    };
    if (auto v = f.get("dataset")) cfg.dataset = rel(*v);
    if (auto v = f.get("scale")) cfg.scale = parse_scale(*v);
    if (auto v = f.get("models")) cfg.models = parse_model_list(*v);
    if (auto v = f.get("effect_prior")) cfg.effect_prior = *v;
    if (auto v = f.get("het_prior")) cfg.het_prior = *v;
    if (auto v = f.get("bma_het_prior")) cfg.bma_het_prior = *v;
    if (auto v = f.get("prior_odds")) cfg.prior_odds = parse_number(*v, "prior_odds");
    if (auto v = f.get("alpha")) cfg.alphas = parse_number_list(*v, "alpha");
    if (auto v = f.get("order")) cfg.order = parse_order(*v);
    if (auto v = f.get("out")) cfg.out_dir = rel(*v);
    if (auto v = f.get("seed")) cfg.seed = parse_count(*v, "seed");
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (cfg.models.empty()) fail("at least one model is required");
    if (!(cfg.prior_odds > 0.0) || !std::isfinite(cfg.prior_odds)) fail("prior odds must be positive");
    if (cfg.alphas.empty()) fail("at least one alpha is required");
    for (double a : cfg.alphas) {
        if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must lie in (0,1), got " + format_double(a));
    }
}

ModelSpec model_spec(const RunConfig& cfg, ModelKind kind) {
    ModelSpec m;
    m.kind = kind;
    m.effect_prior = parse_effect_prior(cfg.effect_prior, cfg.scale);
    if (kind == ModelKind::RE || kind == ModelKind::Marema) m.het_prior = parse_het_prior(cfg.het_prior);
    if (kind == ModelKind::BMA) {
        if (cfg.bma_het_prior) m.het_prior = parse_het_prior(*cfg.bma_het_prior);
        else if (cfg.het_prior != "default") m.het_prior = parse_het_prior(cfg.het_prior);
        else m.het_prior = HeterogeneityPrior::inverse_gamma_tau(1.0, 0.15);
        require_proper(*m.het_prior);
    }
    return m;
}

void cmd_analyze(const RunConfig& cfg, std::ostream& log) {
    validate(cfg);
    const auto d = load_dataset(cfg);
    std::vector<ModelSpec> specs;
    for (auto kind : cfg.models) specs.push_back(model_spec(cfg, kind));

    std::ofstream dump;
    if (cfg.dump_integrand) {
        dump.open(*cfg.dump_integrand, std::ios::binary);
        if (!dump) throw Error(ErrorCode::Io, "cannot write " + cfg.dump_integrand->string());
        dump << "model,hypothesis,piece,u,tau2,log_integrand\n";
    }

    std::vector<EvidenceReport> reports;
    for (const auto& m : specs) {
        MarginalOptions opt;
        if (dump.is_open()) {
            opt.dump = &dump;
            opt.dump_prefix = std::string(bfmeta::to_string(m.kind)) + ",";
        }
        reports.push_back(evaluate(d, m, cfg.prior_odds, opt));
    }

    nlohmann::ordered_json root;
    root["dataset"] = cfg.dataset.filename().string();
    root["k"] = d.k();
    root["scale"] = std::string(to_string(d.scale()));
    root["order"] = std::string(to_string(cfg.order));
    root["prior_odds"] = cfg.prior_odds;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    root["reports"] = arr;
    root["classical"] = classical_json(d);
    root["warnings"] = d.warnings();

    open_out(cfg.out_dir, "report.json") << root.dump(2) << '\n';
    open_out(cfg.out_dir, "report.md") << markdown_report(cfg, d, reports);
    for (const auto& r : reports) {
        log << bfmeta::to_string(r.model) << ": B10 = " << fmt_bf(r.bf10) << " (" << evidence_label(r.bf10) << ")\n";
    }
}

void cmd_sequential(const RunConfig& cfg, std::ostream& log) {
    validate(cfg);
    const auto d = load_dataset(cfg);
    const auto thresholds = thresholds_of(cfg);
    std::vector<EvidenceTrajectory> trajectories;
    for (auto kind : cfg.models) trajectories.push_back(sequential_trajectory(d, model_spec(cfg, kind), thresholds));

    nlohmann::ordered_json root;
    root["dataset"] = cfg.dataset.filename().string();
    root["order"] = std::string(to_string(cfg.order));
    auto arr = nlohmann::ordered_json::array();
    auto crossings = open_out(cfg.out_dir, "crossings.csv");
    crossings << "model,alpha,threshold,first_j\n";
    for (const auto& t : trajectories) {
        const std::string name = std::string(bfmeta::to_string(t.model));
        auto csv = open_out(cfg.out_dir, "trajectory_" + name + ".csv");
        write_trajectory_csv(t, csv);
        for (std::size_t i = 0; i < t.crossings.size(); ++i) {
            const auto& c = t.crossings[i];
            crossings << name << ',' << format_double(cfg.alphas[i]) << ',' << format_double(c.threshold) << ','
                      << (c.first_j ? std::to_string(*c.first_j) : "NA") << '\n';
            log << name << ": B10 >= " << format_double(c.threshold) << " (alpha " << format_double(cfg.alphas[i])
                << ") " << (c.first_j ? "first at j = " + std::to_string(*c.first_j) : std::string("never reached"))
                << '\n';
        }
        arr.push_back(to_json(t));
    }
    root["trajectories"] = arr;
    open_out(cfg.out_dir, "sequential.json") << root.dump(2) << '\n';
}

void cmd_forest(const RunConfig& cfg, bool svg, std::optional<double> estimation_sd, std::ostream& log) {
    const auto d = load_dataset(cfg);
    std::vector<ForestRow> rows;
    for (const auto& s : d.studies()) rows.push_back({s.id, s.year, s.y, s.y - 1.96 * s.se, s.y + 1.96 * s.se});
    auto summary = [&](const std::string& id, double est, double se) {
        rows.push_back({id, std::nullopt, est, est - 1.96 * se, est + 1.96 * se});
    };
    const auto ce = ce_estimate(d);
    summary("CE", ce.estimate, ce.se);
    log << "CE: estimate " << fmt("%.3f", ce.estimate) << ", p = " << fmt_p(ce.p) << '\n';
    if (d.k() >= 2) {
        const auto re = re_estimate(d);
        summary("RE", re.estimate, re.se);
        log << "RE: estimate " << fmt("%.3f", re.estimate) << ", p = " << fmt_p(re.p) << '\n';
    }
    if (estimation_sd) {
        if (!(*estimation_sd > 0.0)) fail("estimation sd must be positive");
        const auto post = analytic_ce_posterior(d, *estimation_sd * *estimation_sd);
        summary("CE_posterior", post.m, std::sqrt(post.v2));
        log << "CE_posterior uses a N(0, " << format_double(*estimation_sd)
            << "^2) prior for estimation only; Bayes factors never use it\n";
    }

    auto csv = open_out(cfg.out_dir, "forest.csv");
    csv << "id,year,y,ci_lo,ci_hi\n";
    for (const auto& r : rows) {
        csv << csv_field(r.id) << ',' << (r.year ? std::to_string(*r.year) : "") << ',' << format_double(r.y) << ','
            << format_double(r.lo) << ',' << format_double(r.hi) << '\n';
    }
    if (svg) open_out(cfg.out_dir, "forest.svg") << forest_svg(rows);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bayes factors for meta-analysis", "bfmeta"};
    app.require_subcommand(1);
    bool paper_scale = false;

    RawOptions analyze_opts, seq_opts, forest_opts, ev_opts;
    auto* analyze = app.add_subcommand("analyze", "Bayes factors for every requested model plus a classical baseline");
    add_common(analyze, analyze_opts, true);
    analyze->add_option("--dump-integrand", analyze_opts.dump, "Write the tau^2 integrand samples to this CSV");
    analyze->add_flag("--paper-scale", paper_scale, "Accepted for symmetry; analysis has no replications");

    auto* sequential = app.add_subcommand("sequential", "Evidence after each study in turn");
    add_common(sequential, seq_opts, true);

    auto* forest = app.add_subcommand("forest", "Forest-plot data");
    add_common(forest, forest_opts, false);
    bool svg = false;
    double estimation_sd = 0.0;
    forest->add_flag("--svg", svg, "Also write forest.svg");
    auto* est_opt = forest->add_option("--estimation-sd", estimation_sd,
                                       "Add a CE posterior row under N(0, sd^2); estimation only");

    std::string scenario, sim_out = ".";
    std::uint64_t sim_seed = 1;
    auto* simulate = app.add_subcommand("simulate", "Run a simulation scenario file");
    simulate->add_option("scenario", scenario, "Scenario file")->required();
    simulate->add_option("--out", sim_out, "Output directory");
    auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "Overrides the scenario seed");
    simulate->add_flag("--paper-scale", paper_scale, "Use the full replication counts");
    unsigned threads = 0;
    simulate->add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");

    auto* check = app.add_subcommand("check-evalue", "Monte Carlo mean of B10 under H0");
    add_common(check, ev_opts, true);
    std::string ev_k = "3,8,20", ev_tau = "0.01,0.2,0.5,1,2,3,4";
    std::size_t ev_reps = 0;
    double sigma_lo = 0.2, sigma_hi = 0.8;
    bool reciprocal = false;
    check->add_option("--k", ev_k, "Comma-separated numbers of studies");
    check->add_option("--tau", ev_tau, "Comma-separated true heterogeneity values");
    check->add_option("--reps", ev_reps, "Replications per cell (default 1000, 10000 with --paper-scale)");
    check->add_option("--sigma-lo", sigma_lo, "Lower bound of the standard errors");
    check->add_option("--sigma-hi", sigma_hi, "Upper bound of the standard errors");
    check->add_flag("--paper-scale", paper_scale, "Use 10000 replications");
    check->add_flag("--reciprocal-p", reciprocal, "Also write the running mean of 1/p under H0");
    check->add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*analyze) {
            cmd_analyze(resolve(analyze_opts, paper_scale), out);
        } else if (*sequential) {
            cmd_sequential(resolve(seq_opts, paper_scale), out);
        } else if (*forest) {
            auto cfg = resolve(forest_opts, paper_scale);
            cmd_forest(cfg, svg, est_opt->count() > 0 ? std::optional<double>(estimation_sd) : std::nullopt, out);
        } else if (*simulate) {
            ScenarioOptions opt;
            opt.paper_scale = paper_scale;
            if (sim_seed_opt->count() > 0) opt.seed = sim_seed;
            opt.threads = threads;
            const auto res = run_scenario_file(scenario, sim_out, opt);
            for (const auto& f : res.files) out << "wrote " << f.string() << '\n';
        } else if (*check) {
            if (ev_opts.models.empty()) ev_opts.models = "RE";
            auto cfg = resolve(ev_opts, paper_scale);
            EvalueGridConfig g;
            g.ks = parse_count_list(ev_k, "k");
            g.taus = parse_number_list(ev_tau, "tau");
            g.models = cfg.models;
            const bool explicit_het = !ev_opts.het_prior.empty();
            if (explicit_het) g.het_priors = parse_het_prior_list(cfg.het_prior);
            g.effect_priors = parse_effect_prior_list(cfg.effect_prior, cfg.scale);
            g.sigma_lo = sigma_lo;
            g.sigma_hi = sigma_hi;
            g.reps = ev_reps > 0 ? ev_reps : (paper_scale ? 10000 : 1000);
            g.seed = cfg.seed;
            g.threads = threads;
            const auto rows = run_evalue_grid(g);
            auto csv = open_out(cfg.out_dir, "evalue.csv");
            write_evalue_csv(rows, csv);
            for (const auto& r : rows) {
                out << bfmeta::to_string(r.model) << " k=" << r.k << " tau=" << format_double(r.tau) << " " << r.prior
                    << ": mean B10 = " << fmt("%.4f", r.mean_bf) << " (se " << fmt("%.4f", r.mc_se) << ") "
                    << bfmeta::to_string(r.verdict) << (r.flagged ? " [>1% failures]" : "") << '\n';
            }
            if (reciprocal) {
                const auto pts = reciprocal_p_demo({100, 1000, 10000, 100000, 1000000}, cfg.seed);
                auto rp = open_out(cfg.out_dir, "reciprocal_p.csv");
                rp << "reps,mean_inverse_p\n";
                for (const auto& p : pts) rp << p.reps << ',' << format_double(p.mean_inverse_p) << '\n';
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}

}  // namespace bfmeta::cli
