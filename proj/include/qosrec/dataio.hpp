// qosrec/dataio.hpp
//
// Canonical session-log CSV, column-mapped ingestion of foreign rating
// datasets, and catalog/cache files.
//
// Session log layout (one row per watched video):
//
//   # qosrec.sessions/1
//   session_id,step,region,watched_id,watched_high_qos,rec_ids,rec_high_qos,
//   selected_position,abandoned,int,qos,qor,qoe
//
// rec_ids and rec_high_qos are ';'-separated and of equal length.
// selected_position is empty unless the user clicked; abandoned is 0/1.
// A row with neither is the natural end of the session.

#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qosrec/catalog.hpp"
#include "qosrec/features.hpp"
#include "qosrec/simulator.hpp"

namespace qosrec {

inline constexpr std::string_view kSessionSchema = "qosrec.sessions/1";

inline const std::vector<std::string>& session_columns() {
    static const std::vector<std::string> cols{
        "session_id", "step",     "region",   "watched_id", "watched_high_qos", "rec_ids",
        "rec_high_qos", "selected_position", "abandoned", "int", "qos", "qor", "qoe"};
    return cols;
}

struct RowIssue {
    std::size_t line = 0;
    std::string message;
};

enum class DataErrorKind { Io, Schema, Range, Chain };

/// Validation failure carrying every offending line.
class DataError : public std::runtime_error {
public:
    DataError(DataErrorKind kind, std::vector<RowIssue> issues);
    DataErrorKind kind() const { return kind_; }
    const std::vector<RowIssue>& issues() const { return issues_; }

private:
    DataErrorKind kind_;
    std::vector<RowIssue> issues_;
};

/// Maps canonical column names onto the columns of a foreign file. Columns
/// not listed keep their canonical name.
struct ColumnMapping {
    std::map<std::string, std::string> columns;
    /// Foreign files usually lack the schema comment.
    bool require_version = false;

    static ColumnMapping from_json(const nlohmann::json& j);
    std::string source_of(const std::string& canonical) const;
};

/// Extra '#' lines written under the schema line (config, seed, ...).
using HeaderComments = std::vector<std::string>;

void save_sessions(std::ostream& out, const std::vector<Session>& sessions,
                   const HeaderComments& comments = {});
void save_sessions(const std::string& path, const std::vector<Session>& sessions,
                   const HeaderComments& comments = {});

/// Throws DataError (Io, Schema, Range or Chain) with line numbers.
std::vector<Session> load_sessions(const std::string& path,
                                   const std::optional<ColumnMapping>& mapping = std::nullopt);
std::vector<Session> parse_sessions(std::string_view text,
                                    const std::optional<ColumnMapping>& mapping = std::nullopt);

/// One rated sample per watched step.
std::vector<Sample> samples_from_sessions(const std::vector<Session>& sessions);

/// Flat rating file with (mapped) columns int, qos, qor, qoe.
std::vector<Sample> load_samples(const std::string& path,
                                 const std::optional<ColumnMapping>& mapping = std::nullopt);

/// videos.csv (id,view_count,is_trending), edges.csv (src,rank,dst),
/// cache.txt (one id per line) and trending.txt under `dir`.
void save_catalog(const std::string& dir, const Catalog& catalog, const CacheSet& cache,
                  const HeaderComments& comments = {});
struct CatalogFiles {
    Catalog catalog;
    CacheSet cache;
};
CatalogFiles load_catalog(const std::string& dir);

}  // namespace qosrec
