// qosrec/csv.hpp
//
// Small RFC 4180 reader/writer: comma separated, double-quoted fields with
// "" escapes, quoted fields may span lines. Lines starting with '#' before
// the header are collected as comments.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qosrec::csv {

struct Record {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

struct Document {
    std::vector<std::string> comments;  // without the leading '#', trimmed
    Record header;
    std::vector<Record> records;
};

/// Throws std::runtime_error on an unterminated quote.
Document parse(std::string_view text);
Document read_file(const std::string& path);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace qosrec::csv
