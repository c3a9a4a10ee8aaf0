// qosrec command-line front end.
//
//   qosrec gen-catalog --out DIR
//   qosrec simulate    --out sessions.csv
//   qosrec fit         --data FILE --out model.json
//   qosrec eval        --data sessions.csv --out DIR
//   qosrec nbayes      --data FILE --out DIR
//   qosrec report      [--data FILE] --out DIR
//
// Shared flags: --config, --seed, --format {csv,json}, --jobs.
// Exit codes: 0 ok, 1 runtime failure, 2 usage/config, 3 input data.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "qosrec/config.hpp"
#include "qosrec/dataio.hpp"
#include "qosrec/pipeline.hpp"

namespace {

using namespace qosrec;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string data;
    std::string format = "csv";
    unsigned jobs = 1;
};

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("qosrec");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::info);
    if (const char* env = std::getenv("QOSREC_LOG")) {
        const std::string v = env;
        if (v == "error")
            spdlog::set_level(spdlog::level::err);
        else if (v == "debug")
            spdlog::set_level(spdlog::level::debug);
        else if (v != "info")
            spdlog::warn("QOSREC_LOG={} not understood; using info", v);
    }
}

// Error printed as one JSON object on stderr.
int fail(int code, std::string_view kind, const std::string& message, const nlohmann::json& details = {}) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    if (!details.is_null()) j["details"] = details;
    std::cerr << j.dump() << '\n';
    return code;
}

RunConfig resolve_config(const Options& o) {
    RunConfig c = o.config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(o.config_path);
    if (o.seed) c.override_seed(*o.seed);
    return c;
}

OutputFormat output_format(const Options& o) { return o.format == "json" ? OutputFormat::Json : OutputFormat::Csv; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(DataErrorKind::Io, {{0, "cannot write " + path.string()}});
    out << text;
}

int cmd_gen_catalog(const Options& o) {
    const RunConfig c = resolve_config(o);
    spdlog::info("generating catalog: {} videos, seed {}", c.catalog.n_videos, c.catalog.seed);
    const World w = build_world(c);
    save_catalog(o.out, w.catalog, w.cache, provenance(c));
    spdlog::info("cache holds {} of {} slots{}", w.cache.size(), w.cache.capacity(),
                 w.cache.under_capacity() ? " (under capacity)" : "");
    return 0;
}

int cmd_simulate(const Options& o) {
    const RunConfig c = resolve_config(o);
    const World w = build_world(c);
    spdlog::info("simulating {} sessions with {} job(s)", c.n_sessions, o.jobs);
    const auto sessions = simulate_sessions(w, c, o.jobs);
    std::filesystem::path p(o.out);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    save_sessions(o.out, sessions, provenance(c));
    std::size_t rows = 0;
    for (const auto& s : sessions) rows += s.steps.size();
    spdlog::info("wrote {} rows to {}", rows, o.out);
    return 0;
}

int cmd_fit(const Options& o) {
    const RunConfig c = resolve_config(o);
    const auto samples = load_input_samples(c, o.data);
    const FitResult r = run_fit(c, samples, o.jobs);
    spdlog::info("{} rows, {} after outlier filter", r.n_input, r.n_used);
    nlohmann::json out = r.model_json;
    out["cv"] = {{"folds", r.report.folds},
                 {"n", r.report.errors.n},
                 {"mae", r.report.errors.mae},
                 {"exact_pct", r.report.errors.bucket_exact},
                 {"off_by_one_pct", r.report.errors.bucket_one},
                 {"off_by_more_pct", r.report.errors.bucket_gt1}};
    write_text(o.out, out.dump(2) + "\n");
    std::cout << "model=" << model_kind_name(c.model) << " mae=" << format_number(r.report.errors.mae)
              << " exact=" << format_number(r.report.errors.bucket_exact, 2)
              << " one=" << format_number(r.report.errors.bucket_one, 2)
              << " more=" << format_number(r.report.errors.bucket_gt1, 2) << '\n';
    return 0;
}

int cmd_eval(const Options& o) {
    const RunConfig c = resolve_config(o);
    const auto sessions = load_sessions(o.data, c.mapping);
    write_tables(o.out, eval_tables(sessions), c, output_format(o));
    return 0;
}

int cmd_nbayes(const Options& o) {
    const RunConfig c = resolve_config(o);
    const auto samples = load_input_samples(c, o.data);
    const NbSummary s = run_nbayes(c, samples);
    write_tables(o.out, nbayes_tables(s), c, output_format(o));
    std::cout << "nb_cv_accuracy=" << format_number(s.cv_accuracy, 2) << '\n';
    return 0;
}

int cmd_report(const Options& o) {
    const RunConfig c = resolve_config(o);
    std::optional<std::string> data;
    if (!o.data.empty()) data = o.data;
    run_report(c, data, o.out, output_format(o), o.jobs);
    spdlog::info("report written to {}", o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"QoS-aware recommendation simulator and QoE analysis"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool needs_data, bool data_optional = false) {
        sub->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "override every seed");
        sub->add_option("--out", o.out, "output path")->required();
        sub->add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u));
        if (needs_data) {
            auto* d = sub->add_option("--data", o.data, "input ratings or session log");
            if (!data_optional) d->required();
        }
    };
    auto* gen = app.add_subcommand("gen-catalog", "write videos, related edges, trending and cache files");
    common(gen, false);
    auto* sim = app.add_subcommand("simulate", "write a simulated session log");
    common(sim, false);
    auto* fit = app.add_subcommand("fit", "outlier filter, fit and cross-validate one model");
    common(fit, true);
    auto* ev = app.add_subcommand("eval", "HR/RR, ratings, abandonment and interest tables");
    common(ev, true);
    auto* nb = app.add_subcommand("nbayes", "chi-square tests and the naive Bayes classifier");
    common(nb, true);
    auto* rep = app.add_subcommand("report", "every table; simulates when --data is absent");
    common(rep, true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail(2, "usage", e.what(), {{"hint", "run with --help"}});
    }

    try {
        if (gen->parsed()) return cmd_gen_catalog(o);
        if (sim->parsed()) return cmd_simulate(o);
        if (fit->parsed()) return cmd_fit(o);
        if (ev->parsed()) return cmd_eval(o);
        if (nb->parsed()) return cmd_nbayes(o);
        if (rep->parsed()) return cmd_report(o);
    } catch (const ConfigError& e) {
        return fail(2, "config", e.what(), {{"path", e.path()}});
    } catch (const DataError& e) {
        nlohmann::json issues = nlohmann::json::array();
        for (const auto& i : e.issues()) issues.push_back({{"line", i.line}, {"message", i.message}});
        return fail(3, "data", e.what(), {{"issues", issues}});
    } catch (const FitError& e) {
        return fail(3, "fit", e.what());
    } catch (const std::exception& e) {
        return fail(1, "runtime", e.what());
    }
    return 1;
}
