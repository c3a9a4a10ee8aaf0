// reports.cpp

#include "qosrec/reports.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "qosrec/csv.hpp"

namespace qosrec {

std::string format_number(double value, int decimals) {
    if (std::isnan(value)) return "nan";
    std::string s = fmt::format("{:.{}f}", value, decimals);
    // Avoid "-0.0000" for tiny negatives.
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

void write_csv(std::ostream& out, const Table& table, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "# table: " << table.name << '\n';
    for (const auto& n : table.notes) out << "# note: " << n << '\n';
    csv::write_row(out, table.columns);
    for (const auto& r : table.rows) csv::write_row(out, r);
}

nlohmann::json table_to_json(const Table& table) {
    nlohmann::json j;
    j["name"] = table.name;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    j["notes"] = table.notes;
    return j;
}

namespace {

std::string opt_number(const std::optional<double>& v, int decimals = 4) {
    return v ? format_number(*v, decimals) : "";
}

std::string class_name(bool high) { return high ? "high" : "low"; }

}  // namespace

// ---- HR / RR

HrRrTable compute_hr_rr(const std::vector<Session>& sessions, double zipf_exponent) {
    HrRrTable t;
    const auto zipf = click_probabilities({ClickKind::Zipf, zipf_exponent}, kListSize);
    double cum = 0.0;
    for (std::size_t k = 0; k <= kListSize; ++k) {
        if (k > 0) cum += zipf[k - 1];
        HrRrRow row;
        row.k = k;
        row.uniform_hr = static_cast<double>(k) / static_cast<double>(kListSize);
        row.zipf_hr = k == kListSize ? 1.0 : cum;
        t.rows.push_back(row);
    }
    std::size_t high_selected = 0, high_shown = 0, shown = 0;
    for (const auto& s : sessions) {
        for (const auto& st : s.steps) {
            if (st.action != StepAction::Selected) continue;
            const std::size_t k = st.recs.high_qos_count();
            const bool hit = st.recs.items[st.selected_position - 1].high_qos;
            auto& row = t.rows[std::min(k, kListSize)];
            ++row.n_steps;
            if (hit) ++row.n_high_selected;
            ++t.n_steps;
            high_selected += hit ? 1 : 0;
            high_shown += k;
            shown += st.recs.size();
        }
    }
    for (auto& row : t.rows)
        if (row.n_steps)
            row.observed_hr = static_cast<double>(row.n_high_selected) / static_cast<double>(row.n_steps);
    if (t.n_steps) t.overall_hr = static_cast<double>(high_selected) / static_cast<double>(t.n_steps);
    if (shown) t.overall_rr = static_cast<double>(high_shown) / static_cast<double>(shown);
    return t;
}

Table emit_hr_rr(const HrRrTable& t) {
    Table out{"hr_rr", {"k_high_qos", "rr", "n_steps", "n_high_selected", "observed_hr", "uniform_hr", "zipf_hr"}, {}, {}};
    for (const auto& r : t.rows)
        out.rows.push_back({std::to_string(r.k), format_number(r.uniform_hr), std::to_string(r.n_steps),
                            std::to_string(r.n_high_selected), opt_number(r.observed_hr),
                            format_number(r.uniform_hr), format_number(r.zipf_hr)});
    out.notes.push_back("overall_hr=" + format_number(t.overall_hr) + " overall_rr=" + format_number(t.overall_rr) +
                        " n_steps=" + std::to_string(t.n_steps));
    return out;
}

// ---- Ratings per class

MeanCi mean_ci(const std::vector<double>& values) {
    MeanCi m;
    m.n = values.size();
    if (values.empty()) return m;
    double sum = 0.0;
    for (double v : values) sum += v;
    m.mean = sum / static_cast<double>(m.n);
    if (m.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        const double sd = std::sqrt(ss / static_cast<double>(m.n - 1));
        m.half_width = 1.96 * sd / std::sqrt(static_cast<double>(m.n));
    }
    return m;
}

RatingsTable compute_ratings_table(const std::vector<Session>& sessions) {
    std::array<std::array<std::vector<double>, 4>, 2> v;  // [class][int,qos,qor,qoe]
    for (const auto& s : sessions) {
        for (std::size_t i = 0; i < s.steps.size(); ++i) {
            const auto& st = s.steps[i];
            auto& c = v[st.watched_high_qos ? 1 : 0];
            c[0].push_back(st.ratings.interest);
            c[1].push_back(st.ratings.qos);
            if (i > 0) c[2].push_back(s.steps[i - 1].ratings.qor);
            c[3].push_back(st.ratings.qoe);
        }
    }
    RatingsTable t;
    for (int cls = 0; cls < 2; ++cls) {
        if (v[cls][0].empty()) {
            t.notes.push_back(class_name(cls == 1) + "-QoS class has no steps; row omitted");
            continue;
        }
        RatingsClassRow r;
        r.high_qos = cls == 1;
        r.n_steps = v[cls][0].size();
        r.interest = mean_ci(v[cls][0]);
        r.qos = mean_ci(v[cls][1]);
        r.qor = mean_ci(v[cls][2]);
        r.qoe = mean_ci(v[cls][3]);
        t.rows.push_back(r);
    }
    t.notes.push_back("qor is the rating of the list the video was selected from; first steps are excluded from it");
    t.notes.push_back("ci95 = 1.96*sd/sqrt(n)");
    return t;
}

Table emit_ratings_table(const RatingsTable& t) {
    Table out{"ratings",
              {"qos_class", "n_steps", "int_mean", "int_ci95", "qos_mean", "qos_ci95", "qor_n", "qor_mean",
               "qor_ci95", "qoe_mean", "qoe_ci95"},
              {},
              t.notes};
    for (const auto& r : t.rows) {
        auto qor_mean = r.qor.n ? format_number(r.qor.mean) : "";
        auto qor_ci = r.qor.n ? format_number(r.qor.half_width) : "";
        out.rows.push_back({class_name(r.high_qos), std::to_string(r.n_steps), format_number(r.interest.mean),
                            format_number(r.interest.half_width), format_number(r.qos.mean),
                            format_number(r.qos.half_width), std::to_string(r.qor.n), qor_mean, qor_ci,
                            format_number(r.qoe.mean), format_number(r.qoe.half_width)});
    }
    return out;
}

// ---- Abandonment

AbandonmentTable compute_abandonment(const std::vector<Session>& sessions) {
    std::array<std::vector<double>, 3> all, abandoned, continued;
    for (const auto& s : sessions) {
        for (const auto& st : s.steps) {
            if (st.action == StepAction::SessionEnd) continue;
            const std::array<double, 3> r{double(st.ratings.interest), double(st.ratings.qos), double(st.ratings.qor)};
            for (std::size_t j = 0; j < 3; ++j) {
                all[j].push_back(r[j]);
                (st.action == StepAction::Abandoned ? abandoned : continued)[j].push_back(r[j]);
            }
        }
    }
    AbandonmentTable t;
    t.n_all = all[0].size();
    t.n_abandoned = abandoned[0].size();
    const std::array<std::string, 3> names{"Int", "QoS", "QoR"};
    for (std::size_t j = 0; j < 3; ++j) {
        AbandonColumn c;
        c.rating = names[j];
        c.all = mean_ci(all[j]);
        c.abandoned = mean_ci(abandoned[j]);
        if (c.all.n && c.abandoned.n && c.all.mean != 0.0)
            c.gap_percent = (c.all.mean - c.abandoned.mean) / c.all.mean * 100.0;
        if (abandoned[j].size() >= 2 && continued[j].size() >= 2) {
            try {
                c.welch_p = welch_t_test(abandoned[j], continued[j]).p;
            } catch (const std::invalid_argument&) {
                // both groups constant; no test
            }
        }
        t.columns.push_back(c);
    }
    return t;
}

Table emit_abandonment_table(const AbandonmentTable& t) {
    Table out{"abandonment", {"rating", "n_all", "all_mean", "n_abandoned", "abandoned_mean", "gap_percent", "welch_p"},
              {}, {}};
    for (const auto& c : t.columns)
        out.rows.push_back({c.rating, std::to_string(c.all.n), c.all.n ? format_number(c.all.mean) : "",
                            std::to_string(c.abandoned.n), c.abandoned.n ? format_number(c.abandoned.mean) : "",
                            opt_number(c.gap_percent, 2), c.welch_p ? fmt::format("{:.4e}", *c.welch_p) : ""});
    out.notes.push_back("steps that ended a session without abandonment are excluded");
    if (t.n_abandoned == 0) out.notes.push_back("no abandoned steps");
    return out;
}

// ---- Heatmap

Heatmap compute_heatmap(const Model& model, const FeatureSpec& spec, int qor_fill) {
    Heatmap grid{};
    for (int q = 1; q <= 5; ++q)
        for (int i = 1; i <= 5; ++i)
            grid[q - 1][i - 1] = predict(model, feature_row(Sample{q, i, qor_fill, 3}, spec));
    return grid;
}

Table emit_heatmap(const Heatmap& grid) {
    Table out{"heatmap", {"qos", "int_1", "int_2", "int_3", "int_4", "int_5"}, {}, {}};
    for (int q = 0; q < 5; ++q) {
        std::vector<std::string> row{std::to_string(q + 1)};
        for (int i = 0; i < 5; ++i) row.push_back(std::to_string(grid[q][i]));
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ---- Interest distribution

std::vector<DistributionRow> compute_distribution(const std::vector<Session>& sessions) {
    std::array<std::array<std::size_t, 5>, 2> counts{};
    for (const auto& s : sessions)
        for (const auto& st : s.steps) ++counts[st.watched_high_qos ? 1 : 0][st.ratings.interest - 1];
    std::vector<DistributionRow> rows;
    for (int cls = 0; cls < 2; ++cls) {
        DistributionRow r;
        r.high_qos = cls == 1;
        for (auto c : counts[cls]) r.n += c;
        if (r.n)
            for (int k = 0; k < 5; ++k)
                r.percent[k] = 100.0 * static_cast<double>(counts[cls][k]) / static_cast<double>(r.n);
        rows.push_back(r);
    }
    return rows;
}

Table emit_distribution_table(const std::vector<DistributionRow>& rows) {
    Table out{"interest_distribution", {"qos_class", "n", "int_1", "int_2", "int_3", "int_4", "int_5"}, {}, {}};
    for (const auto& r : rows) {
        if (!r.n) {
            out.notes.push_back(class_name(r.high_qos) + "-QoS class has no steps; row omitted");
            continue;
        }
        std::vector<std::string> row{class_name(r.high_qos), std::to_string(r.n)};
        for (double p : r.percent) row.push_back(format_number(p, 2));
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ---- Statistics

Table emit_eval_reports(const std::vector<EvalReport>& reports, const std::vector<std::string>& labels) {
    if (reports.size() != labels.size()) throw std::invalid_argument("emit_eval_reports: one label per report");
    Table out{"mae", {"label", "model", "features", "folds", "n", "mae", "exact_pct", "off_by_one_pct", "off_by_more_pct"},
              {}, {}};
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        std::string feats;
        for (const auto& f : r.feature_names) feats += (feats.empty() ? "" : ";") + f;
        out.rows.push_back({labels[i], std::string(model_kind_name(r.kind)), feats, std::to_string(r.folds),
                            std::to_string(r.errors.n), format_number(r.errors.mae), format_number(r.errors.bucket_exact, 2),
                            format_number(r.errors.bucket_one, 2), format_number(r.errors.bucket_gt1, 2)});
    }
    return out;
}

Table emit_weights(const EvalReport& report) {
    Table out{"weights", {"feature", "normalized_weight", "raw_weight"}, {}, {}};
    for (std::size_t i = 0; i < report.feature_names.size() && i < report.normalized_weights.size(); ++i)
        out.rows.push_back({report.feature_names[i], format_number(report.normalized_weights[i]),
                            format_number(report.raw_weights[i])});
    out.notes.push_back(std::string("model=") + std::string(model_kind_name(report.kind)));
    return out;
}

Table emit_sweep(const FeatureSweep& sweep) {
    Table out{"feature_sweep", {"n_features", "mae", "added_feature", "added_weight", "features"}, {}, {}};
    for (const auto& p : sweep.points) {
        std::string feats;
        for (const auto& f : p.features) feats += (feats.empty() ? "" : ";") + f;
        const std::size_t idx = p.n_features - 1;
        out.rows.push_back({std::to_string(p.n_features), format_number(p.mae), sweep.ranking[idx],
                            format_number(sweep.ranked_weights[idx]), feats});
    }
    return out;
}

Table emit_chi_square(const std::vector<ChiSquareRow>& rows) {
    Table out{"chi_square", {"test", "statistic", "dof", "log10_p"}, {}, {}};
    for (const auto& r : rows)
        out.rows.push_back({r.label, format_number(r.result.statistic, 2), std::to_string(r.result.dof),
                            format_number(r.result.log10_p, 3)});
    return out;
}

Table emit_decision_table(const std::vector<DecisionRow>& rows, std::span<const double> priors) {
    Table out{"nb_decision", {"QoS", "Int", "QoR"}, {}, {}};
    for (double p : priors) out.columns.push_back("pi_" + format_number(p, 1));
    for (const auto& r : rows) {
        std::vector<std::string> line;
        for (Level l : r.input) line.emplace_back(level_name(l));
        for (std::size_t j = 0; j < priors.size(); ++j) line.emplace_back(level_name(r.prediction[j]));
        out.rows.push_back(std::move(line));
    }
    return out;
}

}  // namespace qosrec
