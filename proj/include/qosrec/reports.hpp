// qosrec/reports.hpp
//
// Figure and table data computed from session logs and fitted models, and
// the text emitters used for the report bundle. Every emitter is a pure
// function of its inputs.

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qosrec/features.hpp"
#include "qosrec/naive_bayes.hpp"
#include "qosrec/qoemodel.hpp"
#include "qosrec/simulator.hpp"
#include "qosrec/stats.hpp"

namespace qosrec {

/// Rectangular string table; the common currency of the CSV/JSON writers.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;
};

/// Fixed-point formatting with trailing zeros kept, so output is stable.
std::string format_number(double value, int decimals = 4);

/// '#' comment lines, then the header and rows. Notes become trailing
/// comments of the header block.
void write_csv(std::ostream& out, const Table& table, const std::vector<std::string>& comments);
nlohmann::json table_to_json(const Table& table);

// ---- HR / RR --------------------------------------------------------------

struct HrRrRow {
    std::size_t k = 0;  // high-QoS items in the shown list
    std::size_t n_steps = 0;
    std::size_t n_high_selected = 0;
    std::optional<double> observed_hr;  // empty when n_steps = 0
    double uniform_hr = 0.0;
    double zipf_hr = 0.0;
};

struct HrRrTable {
    std::vector<HrRrRow> rows;  // k = 0..5
    std::size_t n_steps = 0;
    double overall_hr = 0.0;
    double overall_rr = 0.0;
};

/// Steps with a click, grouped by the number of high-QoS flags in their
/// list. RR counts recommended items over the same steps.
HrRrTable compute_hr_rr(const std::vector<Session>& sessions,
                        double zipf_exponent = kYoutubeZipfExponent);
Table emit_hr_rr(const HrRrTable& t);

// ---- Ratings per QoS class ------------------------------------------------

struct MeanCi {
    std::size_t n = 0;
    double mean = 0.0;
    double half_width = 0.0;  // 1.96·s/√n
};

MeanCi mean_ci(const std::vector<double>& values);

struct RatingsClassRow {
    bool high_qos = false;
    std::size_t n_steps = 0;
    MeanCi interest, qos, qor, qoe;
};

/// QoR of a step is the rating of the list the watched video was picked
/// from, i.e. the previous step's QoR; first steps have none.
struct RatingsTable {
    std::vector<RatingsClassRow> rows;  // classes without steps are omitted
    std::vector<std::string> notes;
};

RatingsTable compute_ratings_table(const std::vector<Session>& sessions);
Table emit_ratings_table(const RatingsTable& t);

// ---- Abandonment ----------------------------------------------------------

struct AbandonColumn {
    std::string rating;
    MeanCi all;
    MeanCi abandoned;
    std::optional<double> gap_percent;  // (all − abandoned) / all · 100
    std::optional<double> welch_p;      // abandoned vs continued steps
};

/// "All" covers every step that ended in a click or an abandonment; steps
/// that ended the session at its length limit or on an empty list are left
/// out.
struct AbandonmentTable {
    std::size_t n_all = 0;
    std::size_t n_abandoned = 0;
    std::vector<AbandonColumn> columns;  // Int, QoS, QoR
};

AbandonmentTable compute_abandonment(const std::vector<Session>& sessions);
Table emit_abandonment_table(const AbandonmentTable& t);

// ---- Heatmap --------------------------------------------------------------

/// grid[q-1][i-1] = predicted QoE at QoS = q, Int = i, with QoR fixed.
using Heatmap = std::array<std::array<int, 5>, 5>;

Heatmap compute_heatmap(const Model& model, const FeatureSpec& spec, int qor_fill = 3);
Table emit_heatmap(const Heatmap& grid);

// ---- Interest distribution -----------------------------------------------

struct DistributionRow {
    bool high_qos = false;
    std::size_t n = 0;
    std::array<double, 5> percent{};
};

std::vector<DistributionRow> compute_distribution(const std::vector<Session>& sessions);
Table emit_distribution_table(const std::vector<DistributionRow>& rows);

// ---- Statistics tables ----------------------------------------------------

Table emit_eval_reports(const std::vector<EvalReport>& reports, const std::vector<std::string>& labels);
Table emit_weights(const EvalReport& report);
Table emit_sweep(const FeatureSweep& sweep);
struct ChiSquareRow {
    std::string label;
    ChiSquareResult result;
};
Table emit_chi_square(const std::vector<ChiSquareRow>& rows);
Table emit_decision_table(const std::vector<DecisionRow>& rows,
                          std::span<const double> priors = kDecisionPriors);

}  // namespace qosrec
