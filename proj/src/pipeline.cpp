// pipeline.cpp

#include "qosrec/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "qosrec/dataio.hpp"

namespace qosrec {

namespace {

constexpr std::string_view kToolVersion = "qosrec 1.0";

ChiSquareRow safe_chi(std::string label, const ContingencyTable& t, bool yates) {
    ChiSquareRow row{std::move(label), {}};
    try {
        row.result = chi_square(t, yates && t.rows() == 2 && t.cols() == 2);
    } catch (const std::invalid_argument&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.result = {nan, 0, nan};
    }
    return row;
}

int code(Level l) { return l == Level::High ? 1 : 0; }

}  // namespace

World build_world(const RunConfig& config) {
    World w;
    w.catalog = generate_catalog(config.catalog);
    w.cache = build_cache_set(w.catalog.videos, w.catalog.graph, w.catalog.trending, config.cache_capacity,
                              config.trending_reserve);
    return w;
}

std::vector<Session> simulate_sessions(const World& world, const RunConfig& config, unsigned jobs) {
    const SimulationWorld sw{world.catalog.graph, world.cache, world.catalog.trending};
    return run_experiment(sw, config.simulation, config.n_sessions, config.seeds.simulation, jobs);
}

std::vector<std::string> provenance(const RunConfig& config) {
    return {std::string(kToolVersion), "config: " + config_to_json(config).dump(),
            "seed: catalog=" + std::to_string(config.seeds.catalog) +
                " simulation=" + std::to_string(config.seeds.simulation) + " cv=" + std::to_string(config.seeds.cv) +
                " mlp=" + std::to_string(config.seeds.mlp)};
}

std::vector<Sample> load_input_samples(const RunConfig& config, const std::string& path) {
    if (config.input == InputKind::Ratings) return load_samples(path, config.mapping);
    return samples_from_sessions(load_sessions(path, config.mapping));
}

std::vector<Sample> apply_outliers(const RunConfig& config, std::span<const Sample> samples) {
    switch (config.outliers) {
        case OutlierSetting::None: return {samples.begin(), samples.end()};
        case OutlierSetting::QosInt: return filter_outliers(samples, OutlierMode::QosInt);
        case OutlierSetting::QosIntQor: return filter_outliers(samples, OutlierMode::QosIntQor);
    }
    return {};
}

FitResult run_fit(const RunConfig& config, std::span<const Sample> samples, unsigned jobs) {
    const FeatureSpec spec = config.feature_spec();
    const auto used = apply_outliers(config, samples);
    FitResult r{samples.size(), used.size(), DummyModel{}, {}, {}};
    r.report = cross_validate(used, spec, config.model, config.folds, config.seeds.cv, config.fit, jobs);
    r.model = fit_model(config.model, build_design(used, spec), config.fit);
    nlohmann::json hyper = {{"outliers", config_to_json(config)["model"]["outliers"]}, {"folds", config.folds}};
    if (config.model == ModelKind::Mlp) hyper["mlp"] = config_to_json(config)["model"]["mlp"];
    if (config.model == ModelKind::Logistic) hyper["logistic_l2"] = config.fit.logistic_l2;
    r.model_json = model_to_json(r.model, spec, hyper);
    return r;
}

std::vector<Table> eval_tables(const std::vector<Session>& sessions) {
    return {emit_hr_rr(compute_hr_rr(sessions)), emit_ratings_table(compute_ratings_table(sessions)),
            emit_abandonment_table(compute_abandonment(sessions)),
            emit_distribution_table(compute_distribution(sessions))};
}

NbSummary run_nbayes(const RunConfig& config, std::span<const Sample> samples) {
    const auto bin = binarize(samples);
    std::vector<int> qos, in, qor, qoe;
    for (const auto& b : bin) {
        qos.push_back(code(b.qos));
        in.push_back(code(b.interest));
        qor.push_back(code(b.qor));
        qoe.push_back(code(b.qoe));
    }
    auto pair_code = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = 2 * a[i] + b[i];
        return out;
    };

    NbSummary s;
    const bool y = config.yates;
    s.chi_square.push_back(safe_chi("QoS~QoE", cross_tabulate(qos, qoe, 2, 2), y));
    s.chi_square.push_back(safe_chi("Int~QoE", cross_tabulate(in, qoe, 2, 2), y));
    s.chi_square.push_back(safe_chi("QoR~QoE", cross_tabulate(qor, qoe, 2, 2), y));
    s.chi_square.push_back(safe_chi("QoS~Int", cross_tabulate(qos, in, 2, 2), y));
    s.chi_square.push_back(safe_chi("QoS~QoR", cross_tabulate(qos, qor, 2, 2), y));
    s.chi_square.push_back(safe_chi("QoR~Int", cross_tabulate(qor, in, 2, 2), y));
    s.chi_square.push_back(safe_chi("(QoS,Int)~QoE", cross_tabulate(pair_code(qos, in), qoe, 4, 2), y));
    s.chi_square.push_back(safe_chi("(QoS,QoR)~QoE", cross_tabulate(pair_code(qos, qor), qoe, 4, 2), y));
    s.chi_square.push_back(safe_chi("(QoR,Int)~QoE", cross_tabulate(pair_code(qor, in), qoe, 4, 2), y));
    if (config.allow_ratio) {
        // ratio(QoS,Int) below, at or above 1 against the five QoE levels.
        std::vector<int> ratio, qoe5;
        for (const auto& smp : samples) {
            ratio.push_back(smp.qos < smp.interest ? 0 : smp.qos == smp.interest ? 1 : 2);
            qoe5.push_back(smp.qoe - 1);
        }
        s.chi_square.push_back(safe_chi("ratio(QoS,Int)~QoE5", cross_tabulate(ratio, qoe5, 3, 5), false));
    }

    s.model = nb_fit(bin);
    s.decisions = nb_decision_table(s.model);
    s.cv_accuracy = nb_cv_accuracy(bin, config.folds, config.seeds.cv);
    return s;
}

std::vector<Table> nbayes_tables(const NbSummary& s) {
    Table summary{"nb_summary", {"quantity", "value"}, {}, {}};
    summary.rows.push_back({"cv_accuracy_pct", format_number(s.cv_accuracy, 2)});
    summary.rows.push_back({"empirical_prior_high", format_number(s.model.empirical_prior)});
    const char* names[3] = {"QoS", "Int", "QoR"};
    for (int c = 0; c < 2; ++c)
        for (int f = 0; f < 3; ++f)
            summary.rows.push_back({std::string("P(") + names[f] + "=High|QoE=" + (c ? "High" : "Low") + ")",
                                    format_number(s.model.p_high[c][f])});
    return {emit_chi_square(s.chi_square), emit_decision_table(s.decisions), summary};
}

std::vector<Table> report_tables(const RunConfig& config, const std::vector<Session>* sessions,
                                 std::span<const Sample> samples, unsigned jobs) {
    std::vector<Table> tables;
    if (sessions) {
        auto t = eval_tables(*sessions);
        tables.insert(tables.end(), t.begin(), t.end());
    }

    const auto used = apply_outliers(config, samples);
    const FeatureSpec spec = config.feature_spec();
    auto cv = [&](const FeatureSpec& fs, ModelKind kind) {
        return cross_validate(used, fs, kind, config.folds, config.seeds.cv, config.fit, jobs);
    };

    // Pairs of basic features with every regression model.
    {
        std::vector<EvalReport> reports;
        std::vector<std::string> labels;
        const std::vector<std::vector<std::string>> pairs{{"QoS", "Int"}, {"QoS", "QoR"}, {"Int", "QoR"}};
        for (const auto& p : pairs) {
            const auto fs = FeatureSpec::from_names(p);
            for (ModelKind k : {ModelKind::Linear, ModelKind::Logistic, ModelKind::Ordinal, ModelKind::Mlp}) {
                reports.push_back(cv(fs, k));
                labels.push_back(p[0] + "+" + p[1]);
            }
        }
        Table t = emit_eval_reports(reports, labels);
        t.name = "mae_pairs";
        tables.push_back(std::move(t));
    }

    // Configured features against the baselines.
    EvalReport main_ordinal;
    {
        std::vector<EvalReport> reports;
        std::vector<std::string> labels;
        for (ModelKind k : {ModelKind::Ordinal, ModelKind::Linear, ModelKind::Logistic, ModelKind::Mlp}) {
            reports.push_back(cv(spec, k));
            labels.push_back("configured");
        }
        main_ordinal = reports.front();
        reports.push_back(cv(FeatureSpec::basics(), ModelKind::Ordinal));
        labels.push_back("basics");
        reports.push_back(cv(spec, ModelKind::Dummy));
        labels.push_back("baseline");
        reports.push_back(cv(FeatureSpec::from_names(std::vector<std::string>{"Int"}), ModelKind::Vanilla));
        labels.push_back("baseline");
        Table t = emit_eval_reports(reports, labels);
        t.notes.push_back("rows used: " + std::to_string(used.size()) + " of " + std::to_string(samples.size()) +
                          " after the outlier filter");
        tables.push_back(std::move(t));
    }

    tables.push_back(emit_weights(main_ordinal));

    {
        const FeatureSweep sweep = feature_sweep(used, FeatureSpec::full(), ModelKind::Ordinal, config.seeds.cv,
                                                 config.folds, config.fit);
        Table w{"weights_full", {"feature", "normalized_weight"}, {}, {}};
        for (std::size_t i = 0; i < sweep.ranking.size(); ++i)
            w.rows.push_back({sweep.ranking[i], format_number(sweep.ranked_weights[i])});
        w.notes.push_back("ordered by decreasing absolute weight");
        tables.push_back(std::move(w));
        tables.push_back(emit_sweep(sweep));
    }

    {
        const Model m = fit_model(config.model, build_design(used, spec), config.fit);
        Table h = emit_heatmap(compute_heatmap(m, spec, config.heatmap_qor));
        h.notes.push_back(std::string("model=") + std::string(model_kind_name(config.model)) +
                          " qor=" + std::to_string(config.heatmap_qor));
        tables.push_back(std::move(h));
        const FeatureSpec qi = FeatureSpec::qos_int();
        const Model mlp = fit_model(ModelKind::Mlp, build_design(used, qi), config.fit);
        Table hm = emit_heatmap(compute_heatmap(mlp, qi, config.heatmap_qor));
        hm.name = "heatmap_mlp";
        hm.notes.push_back("model=mlp features=QoS;Int");
        tables.push_back(std::move(hm));
    }

    {
        Table c{"meta_correlation", {"scope", "n", "pearson_min_vs_product"}, {}, {}};
        auto corr = [](const std::vector<Sample>& ss) -> std::string {
            std::vector<double> a, b;
            for (const auto& s : ss) {
                a.push_back(std::min(s.qos, s.interest));
                b.push_back(s.qos * s.interest);
            }
            try {
                return format_number(pearson_corr(a, b));
            } catch (const std::invalid_argument&) {
                return "";
            }
        };
        std::vector<Sample> grid;
        for (int q = 1; q <= 5; ++q)
            for (int i = 1; i <= 5; ++i) grid.push_back({q, i, 3, 3});
        c.rows.push_back({"grid", "25", corr(grid)});
        c.rows.push_back({"data", std::to_string(samples.size()), corr({samples.begin(), samples.end()})});
        c.rows.push_back({"data_filtered", std::to_string(used.size()), corr(used)});
        tables.push_back(std::move(c));
    }

    auto nb = nbayes_tables(run_nbayes(config, samples));
    tables.insert(tables.end(), nb.begin(), nb.end());
    return tables;
}

void write_tables(const std::string& dir, const std::vector<Table>& tables, const RunConfig& config,
                  OutputFormat format) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto comments = provenance(config);
    if (format == OutputFormat::Json) {
        nlohmann::json bundle;
        bundle["generator"] = kToolVersion;
        bundle["config"] = config_to_json(config);
        bundle["tables"] = nlohmann::json::array();
        for (const auto& t : tables) bundle["tables"].push_back(table_to_json(t));
        std::ofstream out(fs::path(dir) / "report.json", std::ios::binary);
        if (!out) throw DataError(DataErrorKind::Io, {{0, "cannot write into " + dir}});
        out << bundle.dump(2) << '\n';
        return;
    }
    for (const auto& t : tables) {
        std::ofstream out(fs::path(dir) / (t.name + ".csv"), std::ios::binary);
        if (!out) throw DataError(DataErrorKind::Io, {{0, "cannot write into " + dir}});
        write_csv(out, t, comments);
    }
}

void run_report(const RunConfig& config, const std::optional<std::string>& data, const std::string& out_dir,
                OutputFormat format, unsigned jobs) {
    namespace fs = std::filesystem;
    std::vector<Session> sessions;
    std::vector<Sample> samples;
    bool have_sessions = false;
    if (data) {
        if (config.input == InputKind::Sessions) {
            sessions = load_sessions(*data, config.mapping);
            have_sessions = true;
            samples = samples_from_sessions(sessions);
        } else {
            samples = load_samples(*data, config.mapping);
        }
    } else {
        const World world = build_world(config);
        sessions = simulate_sessions(world, config, jobs);
        have_sessions = true;
        samples = samples_from_sessions(sessions);
        fs::create_directories(out_dir);
        save_sessions((fs::path(out_dir) / "sessions.csv").string(), sessions, provenance(config));
    }
    if (samples.empty()) throw DataError(DataErrorKind::Range, {{0, "no rated samples in the input"}});
    const auto tables = report_tables(config, have_sessions ? &sessions : nullptr, samples, jobs);
    write_tables(out_dir, tables, config, format);
    std::ofstream cfg(fs::path(out_dir) / "config.json", std::ios::binary);
    cfg << config_to_json(config).dump(2) << '\n';
}

}  // namespace qosrec
