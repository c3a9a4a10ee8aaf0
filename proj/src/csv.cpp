// csv.cpp

#include "qosrec/csv.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qosrec::csv {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Document parse(std::string_view text) {
    Document doc;
    std::size_t pos = 0;
    std::size_t line = 1;
    bool have_header = false;

    if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;  // UTF-8 BOM

    while (pos < text.size()) {
        // Comments and blank lines are only recognised at record starts.
        if (text[pos] == '#' && !have_header) {
            auto nl = text.find('\n', pos);
            auto end = nl == std::string_view::npos ? text.size() : nl;
            doc.comments.push_back(trim(text.substr(pos + 1, end - pos - 1)));
            pos = end == text.size() ? end : end + 1;
            ++line;
            continue;
        }
        if (text[pos] == '\n' || (text[pos] == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n')) {
            pos += text[pos] == '\r' ? 2 : 1;
            ++line;
            continue;
        }

        Record rec;
        rec.line = line;
        std::string field;
        bool in_quotes = false;
        bool done = false;
        while (!done) {
            if (pos >= text.size()) {
                if (in_quotes)
                    throw std::runtime_error("line " + std::to_string(rec.line) + ": unterminated quoted field");
                rec.fields.push_back(std::move(field));
                break;
            }
            char ch = text[pos];
            if (in_quotes) {
                if (ch == '"') {
                    if (pos + 1 < text.size() && text[pos + 1] == '"') {
                        field.push_back('"');
                        pos += 2;
                    } else {
                        in_quotes = false;
                        ++pos;
                    }
                } else {
                    if (ch == '\n') ++line;
                    field.push_back(ch);
                    ++pos;
                }
                continue;
            }
            switch (ch) {
                case '"':
                    in_quotes = true;
                    ++pos;
                    break;
                case ',':
                    rec.fields.push_back(std::move(field));
                    field.clear();
                    ++pos;
                    break;
                case '\r':
                    ++pos;
                    break;
                case '\n':
                    rec.fields.push_back(std::move(field));
                    ++pos;
                    ++line;
                    done = true;
                    break;
                default:
                    field.push_back(ch);
                    ++pos;
            }
        }
        if (!have_header) {
            doc.header = std::move(rec);
            for (auto& f : doc.header.fields) f = trim(f);
            have_header = true;
        } else {
            doc.records.push_back(std::move(rec));
        }
    }
    return doc;
}

Document read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace qosrec::csv
