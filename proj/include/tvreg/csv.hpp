#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "tvreg/error.hpp"

namespace tvreg {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // excluding the header
    std::vector<long> row_lines;                 // physical line of each row

    long column(const std::string& name) const {
        for (size_t k = 0; k < header.size(); ++k)
            if (header[k] == name) return static_cast<long>(k);
        throw DataError("column '" + name + "' not found in header");
    }
};

// RFC 4180 reader: quoted fields, doubled-quote escapes, CR LF or LF line
// ends, header row required. Every data row must match the header width.
inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any_char_in_record = false;
    long phys_line = 1;    // current physical line
    long record_line = 1;  // line where the current record started

    auto end_record = [&]() {
        record.push_back(field);
        field.clear();
        if (table.header.empty()) {
            table.header = record;
        } else {
            if (record.size() != table.header.size())
                throw ParseError("row has " + std::to_string(record.size()) + " fields, expected " +
                                     std::to_string(table.header.size()),
                                 record_line);
            table.rows.push_back(record);
            table.row_lines.push_back(record_line);
        }
        record.clear();
        any_char_in_record = false;
    };

    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            if (c == '\n') ++phys_line;
            field.push_back(c);
            ++i;
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) throw ParseError("stray quote inside unquoted field", phys_line);
                quoted = true;
                any_char_in_record = true;
                ++i;
                break;
            case ',':
                record.push_back(field);
                field.clear();
                any_char_in_record = true;
                ++i;
                break;
            case '\r':
                if (i + 1 < n && text[i + 1] == '\n') ++i;
                [[fallthrough]];
            case '\n':
                if (any_char_in_record || !field.empty() || !record.empty()) end_record();
                ++phys_line;
                record_line = phys_line;
                ++i;
                break;
            default:
                field.push_back(c);
                any_char_in_record = true;
                ++i;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", record_line);
    if (any_char_in_record || !field.empty() || !record.empty()) end_record();
    if (table.header.empty()) throw DataError("empty csv: " + path);
    return table;
}

// Strict finite-number parse of a whole field ('.' decimal separator).
inline double parse_number(const std::string& field, long line) {
    if (field.empty()) throw ParseError("missing value", line);
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ParseError("not a number: '" + field + "'", line);
    if (!std::isfinite(value)) throw ParseError("non-finite value: '" + field + "'", line);
    return value;
}

}  // namespace tvreg
