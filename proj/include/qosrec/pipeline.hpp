// qosrec/pipeline.hpp
//
// The work behind each CLI subcommand, callable from tests. Output goes to
// files under a caller-supplied path only.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qosrec/config.hpp"
#include "qosrec/reports.hpp"

namespace qosrec {

enum class OutputFormat { Csv, Json };

struct World {
    Catalog catalog;
    CacheSet cache;
};

World build_world(const RunConfig& config);
std::vector<Session> simulate_sessions(const World& world, const RunConfig& config, unsigned jobs);

/// Header comment lines naming the tool, schema, config and seed.
std::vector<std::string> provenance(const RunConfig& config);

/// Ratings from --data: a session log or a flat ratings file, per io.input.
std::vector<Sample> load_input_samples(const RunConfig& config, const std::string& path);

std::vector<Sample> apply_outliers(const RunConfig& config, std::span<const Sample> samples);

struct FitResult {
    std::size_t n_input = 0;
    std::size_t n_used = 0;  // after the outlier filter
    Model model;
    EvalReport report;
    nlohmann::json model_json;
};

FitResult run_fit(const RunConfig& config, std::span<const Sample> samples, unsigned jobs);

/// HR/RR, ratings, abandonment and interest distribution tables.
std::vector<Table> eval_tables(const std::vector<Session>& sessions);

struct NbSummary {
    std::vector<ChiSquareRow> chi_square;
    NBModel model;
    std::vector<DecisionRow> decisions;
    double cv_accuracy = 0.0;
};

NbSummary run_nbayes(const RunConfig& config, std::span<const Sample> samples);
std::vector<Table> nbayes_tables(const NbSummary& summary);

/// Every table of the bundle. Sessions are optional (a flat ratings file
/// has none); samples must not be empty.
std::vector<Table> report_tables(const RunConfig& config, const std::vector<Session>* sessions,
                                 std::span<const Sample> samples, unsigned jobs);

/// Writes one CSV per table, or a single report.json, into `dir`.
void write_tables(const std::string& dir, const std::vector<Table>& tables, const RunConfig& config,
                  OutputFormat format);

/// Full bundle. Without `data` a catalog and session log are simulated and
/// sessions.csv is written next to the tables.
void run_report(const RunConfig& config, const std::optional<std::string>& data, const std::string& out_dir,
                OutputFormat format, unsigned jobs);

}  // namespace qosrec
