#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace radtrim::util {

/// Minimal RFC-4180-style CSV support: quoted fields, embedded commas and
/// quotes, CR/LF line endings. Header row is required by all callers.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index for a header name, if present.
    std::optional<std::size_t> column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

std::string csv_escape(const std::string& field);

}  // namespace radtrim::util
