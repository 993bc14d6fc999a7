// Minimal RFC 4180 CSV reading: quoted fields, doubled quotes, CRLF.
#pragma once

#include <istream>
#include <string>
#include <vector>

#include "optbin/core.hpp"

namespace optbin {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Throws BinningError when the column is absent.
    std::size_t column(const std::string& name) const;
};

// First record is the header; every row must have as many fields. Throws
// BinningError for an empty input, ragged rows or an unterminated quote.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

// `missing_token` -> missing; text parsing fully as a number ('.' decimal
// point, independent of locale) -> numeric (NaN -> missing); otherwise a label.
Cell parse_cell(const std::string& text, const std::string& missing_token = "");

// Quotes a field when it holds a separator, quote or line break.
std::string csv_escape(const std::string& field);

}  // namespace optbin
