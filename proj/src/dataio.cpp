// dataio.cpp

#include "qosrec/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "qosrec/csv.hpp"

namespace qosrec {

namespace {

std::string summarize(const std::vector<RowIssue>& issues) {
    std::string msg;
    const std::size_t shown = std::min<std::size_t>(issues.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i) msg += "; ";
        msg += issues[i].line ? "line " + std::to_string(issues[i].line) + ": " : "";
        msg += issues[i].message;
    }
    if (issues.size() > shown) msg += "; ... (" + std::to_string(issues.size() - shown) + " more)";
    return msg;
}

std::string_view kind_label(DataErrorKind k) {
    switch (k) {
        case DataErrorKind::Io: return "io error";
        case DataErrorKind::Schema: return "schema error";
        case DataErrorKind::Range: return "range error";
        case DataErrorKind::Chain: return "chain error";
    }
    return "error";
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return value;
}

std::optional<bool> parse_flag(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "1" || lower == "true") return true;
    if (lower == "0" || lower == "false") return false;
    return std::nullopt;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto p = s.find(sep, start);
        out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

// Resolves canonical column names to field indices of a parsed document.
class ColumnIndex {
public:
    ColumnIndex(const csv::Document& doc, const std::optional<ColumnMapping>& mapping,
                const std::vector<std::string>& required) {
        std::unordered_map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < doc.header.fields.size(); ++i) pos.emplace(doc.header.fields[i], i);
        std::vector<RowIssue> missing;
        for (const auto& c : required) {
            const std::string src = mapping ? mapping->source_of(c) : c;
            auto it = pos.find(src);
            if (it == pos.end())
                missing.push_back({doc.header.line, "missing column '" + src + "'"});
            else
                index_[c] = it->second;
        }
        if (!missing.empty()) throw DataError(DataErrorKind::Schema, std::move(missing));
        width_ = doc.header.fields.size();
    }

    std::string_view get(const csv::Record& r, const std::string& canonical) const {
        return r.fields[index_.at(canonical)];
    }
    std::size_t width() const { return width_; }

private:
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t width_ = 0;
};

void check_version(const csv::Document& doc, const std::optional<ColumnMapping>& mapping) {
    const bool required = mapping ? mapping->require_version : true;
    if (!required) return;
    if (doc.comments.empty() || doc.comments.front() != kSessionSchema)
        throw DataError(DataErrorKind::Schema,
                        {{1, "expected schema line '# " + std::string(kSessionSchema) + "'"}});
}

struct RowReader {
    const ColumnIndex& cols;
    const csv::Record& rec;
    std::vector<RowIssue>& issues;

    template <typename T>
    std::optional<T> number(const std::string& col) {
        auto v = parse_number<T>(cols.get(rec, col));
        if (!v) issues.push_back({rec.line, col + ": '" + std::string(cols.get(rec, col)) + "' is not a number"});
        return v;
    }

    std::optional<int> rating(const std::string& col) {
        auto v = number<int>(col);
        if (v && (*v < 1 || *v > 5)) {
            issues.push_back({rec.line, col + " = " + std::to_string(*v) + " outside 1..5"});
            return std::nullopt;
        }
        return v;
    }

    std::optional<bool> flag(const std::string& col) {
        auto v = parse_flag(cols.get(rec, col));
        if (!v) issues.push_back({rec.line, col + ": '" + std::string(cols.get(rec, col)) + "' is not 0/1"});
        return v;
    }
};

struct ParsedRow {
    std::size_t line = 0;
    std::string session_id;
    std::string region;
    SessionStep step;
};

}  // namespace

DataError::DataError(DataErrorKind kind, std::vector<RowIssue> issues)
    : std::runtime_error(std::string(kind_label(kind)) + ": " + summarize(issues)),
      kind_(kind),
      issues_(std::move(issues)) {}

ColumnMapping ColumnMapping::from_json(const nlohmann::json& j) {
    ColumnMapping m;
    for (const auto& [key, value] : j.items()) {
        if (key == "columns") {
            for (const auto& [canon, src] : value.items()) m.columns[canon] = src.get<std::string>();
        } else if (key == "require_version") {
            m.require_version = value.get<bool>();
        } else {
            throw std::invalid_argument("column mapping: unknown key '" + key + "'");
        }
    }
    return m;
}

std::string ColumnMapping::source_of(const std::string& canonical) const {
    auto it = columns.find(canonical);
    return it == columns.end() ? canonical : it->second;
}

void save_sessions(std::ostream& out, const std::vector<Session>& sessions, const HeaderComments& comments) {
    out << "# " << kSessionSchema << '\n';
    for (const auto& c : comments) out << "# " << c << '\n';
    csv::write_row(out, session_columns());
    for (const auto& s : sessions) {
        for (const auto& st : s.steps) {
            std::string ids, flags;
            for (std::size_t i = 0; i < st.recs.items.size(); ++i) {
                if (i) {
                    ids += ';';
                    flags += ';';
                }
                ids += std::to_string(to_u64(st.recs.items[i].id));
                flags += st.recs.items[i].high_qos ? '1' : '0';
            }
            csv::write_row(out, {s.session_id, std::to_string(st.step_index), s.region,
                                 std::to_string(to_u64(st.watched)), st.watched_high_qos ? "1" : "0", ids,
                                 flags,
                                 st.action == StepAction::Selected ? std::to_string(st.selected_position) : "",
                                 st.action == StepAction::Abandoned ? "1" : "0",
                                 std::to_string(st.ratings.interest), std::to_string(st.ratings.qos),
                                 std::to_string(st.ratings.qor), std::to_string(st.ratings.qoe)});
        }
    }
}

void save_sessions(const std::string& path, const std::vector<Session>& sessions, const HeaderComments& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(DataErrorKind::Io, {{0, "cannot write " + path}});
    save_sessions(out, sessions, comments);
}

std::vector<Session> parse_sessions(std::string_view text, const std::optional<ColumnMapping>& mapping) {
    csv::Document doc;
    try {
        doc = csv::parse(text);
    } catch (const std::runtime_error& e) {
        throw DataError(DataErrorKind::Schema, {{0, e.what()}});
    }
    check_version(doc, mapping);
    const ColumnIndex cols(doc, mapping, session_columns());

    std::vector<RowIssue> issues;
    std::vector<ParsedRow> rows;
    for (const auto& rec : doc.records) {
        if (rec.fields.size() != cols.width()) {
            issues.push_back({rec.line, "expected " + std::to_string(cols.width()) + " fields, got " +
                                            std::to_string(rec.fields.size())});
            continue;
        }
        const std::size_t before = issues.size();
        RowReader rd{cols, rec, issues};
        ParsedRow row;
        row.line = rec.line;
        row.session_id = std::string(cols.get(rec, "session_id"));
        row.region = std::string(cols.get(rec, "region"));
        if (row.session_id.empty()) issues.push_back({rec.line, "empty session_id"});

        auto step = rd.number<std::size_t>("step");
        if (step && (*step < 1 || *step > kMaxSteps))
            issues.push_back({rec.line, "step = " + std::to_string(*step) + " outside 1..5"});
        auto watched = rd.number<std::uint64_t>("watched_id");
        auto watched_high = rd.flag("watched_high_qos");
        auto abandoned = rd.flag("abandoned");
        auto qi = rd.rating("int");
        auto qs = rd.rating("qos");
        auto qr = rd.rating("qor");
        auto qe = rd.rating("qoe");

        auto id_parts = split(cols.get(rec, "rec_ids"), ';');
        auto flag_parts = split(cols.get(rec, "rec_high_qos"), ';');
        if (id_parts.size() != flag_parts.size())
            issues.push_back({rec.line, "rec_ids and rec_high_qos differ in length"});
        if (id_parts.size() > kListSize)
            issues.push_back({rec.line, "more than " + std::to_string(kListSize) + " recommendations"});
        RecommendationList recs;
        for (std::size_t i = 0; i < id_parts.size() && i < flag_parts.size(); ++i) {
            auto id = parse_number<std::uint64_t>(id_parts[i]);
            auto fl = parse_flag(flag_parts[i]);
            if (!id || !fl) {
                issues.push_back({rec.line, "malformed recommendation entry " + std::to_string(i + 1)});
                continue;
            }
            recs.items.push_back({i + 1, VideoId{*id}, *fl});
        }
        recs.exhausted = recs.items.size() < kListSize;

        std::string_view sel = cols.get(rec, "selected_position");
        std::optional<std::size_t> selected;
        if (!sel.empty()) {
            selected = parse_number<std::size_t>(sel);
            if (!selected || *selected < 1 || *selected > recs.items.size()) {
                issues.push_back({rec.line, "selected_position '" + std::string(sel) + "' outside the list"});
                selected.reset();
            }
        }
        if (selected && abandoned && *abandoned)
            issues.push_back({rec.line, "row is both selected and abandoned"});
        if (issues.size() != before) continue;

        SessionStep& st = row.step;
        st.step_index = *step;
        st.watched = VideoId{*watched};
        st.watched_high_qos = *watched_high;
        st.recs = std::move(recs);
        st.ratings = {*qi, *qs, *qr, *qe};
        if (selected) {
            st.action = StepAction::Selected;
            st.selected_position = *selected;
        } else {
            st.action = *abandoned ? StepAction::Abandoned : StepAction::SessionEnd;
        }
        rows.push_back(std::move(row));
    }
    if (!issues.empty()) throw DataError(DataErrorKind::Range, std::move(issues));

    // Group by session id in order of first appearance.
    std::vector<Session> sessions;
    std::vector<std::vector<const ParsedRow*>> members;
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& r : rows) {
        auto [it, fresh] = slot.emplace(r.session_id, sessions.size());
        if (fresh) {
            sessions.push_back({r.session_id, r.region, {}});
            members.emplace_back();
        }
        members[it->second].push_back(&r);
    }

    for (std::size_t s = 0; s < sessions.size(); ++s) {
        auto& rs = members[s];
        std::stable_sort(rs.begin(), rs.end(),
                         [](const ParsedRow* a, const ParsedRow* b) { return a->step.step_index < b->step.step_index; });
        const std::string& sid = sessions[s].session_id;
        std::string listed;
        for (const auto* r : rs) listed += (listed.empty() ? "" : ",") + std::to_string(r->step.step_index);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            const ParsedRow& r = *rs[k];
            if (r.step.step_index != k + 1) {
                issues.push_back({r.line, "session " + sid + " has steps " + listed + "; expected 1.." +
                                              std::to_string(rs.size())});
                break;
            }
            if (r.region != sessions[s].region)
                issues.push_back({r.line, "session " + sid + " changes region"});
            const bool last = k + 1 == rs.size();
            if (!last) {
                if (r.step.action != StepAction::Selected) {
                    issues.push_back({r.line, "session " + sid + " continues after a step without a selection"});
                    break;
                }
                const VideoId next = r.step.recs.items[r.step.selected_position - 1].id;
                if (rs[k + 1]->step.watched != next) {
                    issues.push_back({rs[k + 1]->line, "session " + sid + " step " + std::to_string(k + 2) +
                                                           " does not watch the item selected at step " +
                                                           std::to_string(k + 1)});
                    break;
                }
            } else if (r.step.action == StepAction::Selected) {
                issues.push_back({r.line, "session " + sid + " ends on a selection with no following step"});
            }
            sessions[s].steps.push_back(r.step);
        }
    }
    if (!issues.empty()) throw DataError(DataErrorKind::Chain, std::move(issues));
    return sessions;
}

std::vector<Session> load_sessions(const std::string& path, const std::optional<ColumnMapping>& mapping) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataErrorKind::Io, {{0, "cannot open " + path}});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sessions(ss.str(), mapping);
}

std::vector<Sample> samples_from_sessions(const std::vector<Session>& sessions) {
    std::vector<Sample> out;
    for (const auto& s : sessions)
        for (const auto& st : s.steps)
            out.push_back({st.ratings.qos, st.ratings.interest, st.ratings.qor, st.ratings.qoe});
    return out;
}

std::vector<Sample> load_samples(const std::string& path, const std::optional<ColumnMapping>& mapping) {
    csv::Document doc;
    try {
        doc = csv::read_file(path);
    } catch (const std::runtime_error& e) {
        throw DataError(DataErrorKind::Io, {{0, e.what()}});
    }
    const ColumnIndex cols(doc, mapping, {"int", "qos", "qor", "qoe"});
    std::vector<RowIssue> issues;
    std::vector<Sample> out;
    for (const auto& rec : doc.records) {
        if (rec.fields.size() != cols.width()) {
            issues.push_back({rec.line, "expected " + std::to_string(cols.width()) + " fields, got " +
                                            std::to_string(rec.fields.size())});
            continue;
        }
        RowReader rd{cols, rec, issues};
        auto qi = rd.rating("int");
        auto qs = rd.rating("qos");
        auto qr = rd.rating("qor");
        auto qe = rd.rating("qoe");
        if (qi && qs && qr && qe) out.push_back({*qs, *qi, *qr, *qe});
    }
    if (!issues.empty()) throw DataError(DataErrorKind::Range, std::move(issues));
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError(DataErrorKind::Io, {{0, "cannot write " + p.string()}});
    return out;
}

void write_comments(std::ostream& out, const HeaderComments& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
}

std::vector<std::uint64_t> read_id_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw DataError(DataErrorKind::Io, {{0, "cannot open " + p.string()}});
    std::vector<std::uint64_t> ids;
    std::vector<RowIssue> issues;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty() || line[0] == '#') continue;
        auto v = parse_number<std::uint64_t>(line);
        if (!v)
            issues.push_back({n, "'" + line + "' is not an id"});
        else
            ids.push_back(*v);
    }
    if (!issues.empty()) throw DataError(DataErrorKind::Range, std::move(issues));
    return ids;
}

}  // namespace

void save_catalog(const std::string& dir, const Catalog& catalog, const CacheSet& cache,
                  const HeaderComments& comments) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        auto out = open_out(fs::path(dir) / "videos.csv");
        write_comments(out, comments);
        out << "id,view_count,is_trending\n";
        for (const auto& v : catalog.videos)
            out << to_u64(v.id) << ',' << v.view_count << ',' << (v.is_trending ? 1 : 0) << '\n';
    }
    {
        auto out = open_out(fs::path(dir) / "edges.csv");
        write_comments(out, comments);
        out << "src,rank,dst\n";
        for (const auto& [src, list] : catalog.graph.adjacency())
            for (std::size_t r = 0; r < list.size(); ++r)
                out << to_u64(src) << ',' << r + 1 << ',' << to_u64(list[r]) << '\n';
    }
    {
        auto out = open_out(fs::path(dir) / "trending.txt");
        write_comments(out, comments);
        for (VideoId id : catalog.trending) out << to_u64(id) << '\n';
    }
    {
        auto out = open_out(fs::path(dir) / "cache.txt");
        write_comments(out, comments);
        out << "# capacity " << cache.capacity() << '\n';
        for (VideoId id : cache.members()) out << to_u64(id) << '\n';
    }
}

CatalogFiles load_catalog(const std::string& dir) {
    namespace fs = std::filesystem;
    CatalogFiles files;
    std::vector<RowIssue> issues;

    auto videos = csv::read_file((fs::path(dir) / "videos.csv").string());
    const ColumnIndex vcols(videos, std::nullopt, {"id", "view_count", "is_trending"});
    std::unordered_map<std::uint64_t, bool> known;
    for (const auto& rec : videos.records) {
        if (rec.fields.size() != vcols.width()) {
            issues.push_back({rec.line, "wrong field count"});
            continue;
        }
        RowReader rd{vcols, rec, issues};
        auto id = rd.number<std::uint64_t>("id");
        auto views = rd.number<std::uint64_t>("view_count");
        auto trending = rd.flag("is_trending");
        if (id && views && trending) {
            files.catalog.videos.push_back({VideoId{*id}, *views, *trending});
            known[*id] = true;
        }
    }

    auto edges = csv::read_file((fs::path(dir) / "edges.csv").string());
    const ColumnIndex ecols(edges, std::nullopt, {"src", "rank", "dst"});
    std::map<VideoId, std::vector<std::pair<std::size_t, VideoId>>> lists;
    for (const auto& rec : edges.records) {
        if (rec.fields.size() != ecols.width()) {
            issues.push_back({rec.line, "wrong field count"});
            continue;
        }
        RowReader rd{ecols, rec, issues};
        auto src = rd.number<std::uint64_t>("src");
        auto rank = rd.number<std::size_t>("rank");
        auto dst = rd.number<std::uint64_t>("dst");
        if (!(src && rank && dst)) continue;
        if (!known.contains(*src) || !known.contains(*dst)) {
            issues.push_back({rec.line, "edge references an unknown video"});
            continue;
        }
        lists[VideoId{*src}].push_back({*rank, VideoId{*dst}});
    }
    if (!issues.empty()) throw DataError(DataErrorKind::Range, std::move(issues));
    for (auto& [src, entries] : lists) {
        std::sort(entries.begin(), entries.end());
        std::vector<VideoId> ordered;
        for (const auto& e : entries) ordered.push_back(e.second);
        try {
            files.catalog.graph.set_related(src, std::move(ordered));
        } catch (const std::invalid_argument& e) {
            throw DataError(DataErrorKind::Range, {{0, e.what()}});
        }
    }

    for (auto id : read_id_lines(fs::path(dir) / "trending.txt")) files.catalog.trending.push_back(VideoId{id});

    std::size_t capacity = 0;
    {
        std::ifstream in(fs::path(dir) / "cache.txt");
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("# capacity ", 0) == 0) capacity = std::stoull(line.substr(11));
    }
    std::vector<VideoId> members;
    for (auto id : read_id_lines(fs::path(dir) / "cache.txt")) members.push_back(VideoId{id});
    files.cache = CacheSet(std::move(members), std::max(capacity, members.size()));
    return files;
}

}  // namespace qosrec
