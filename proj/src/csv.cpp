#include "optbin/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace optbin {

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw BinningError("column '" + name + "' not found in CSV header");
}

namespace {

// Reads one record; returns false at end of input.
bool next_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    const std::size_t start_line = line;
    for (;;) {
        const int ch = in.get();
        if (ch == std::char_traits<char>::eof()) {
            if (quoted)
                throw BinningError("unterminated quote starting on line " +
                                   std::to_string(start_line));
            fields.push_back(std::move(field));
            return true;
        }
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\r' && in.peek() == '\n') {
            // CRLF: handled with the '\n'.
        } else if (c == '\n') {
            ++line;
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
        }
    }
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::size_t line = 1;
    std::vector<std::string> fields;
    if (!next_record(in, fields, line) || (fields.size() == 1 && fields[0].empty()))
        throw BinningError("empty CSV input");
    t.header = fields;
    while (next_record(in, fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        if (fields.size() != t.header.size())
            throw BinningError("CSV line " + std::to_string(line - 1) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(t.header.size()));
        t.rows.push_back(fields);
    }
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BinningError("cannot open '" + path + "'");
    return read_csv(in);
}

Cell parse_cell(const std::string& text, const std::string& missing_token) {
    if (text == missing_token) return std::monostate{};
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && ptr == last && first != last) {
        if (std::isnan(v)) return std::monostate{};
        return v;
    }
    return text;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace optbin
