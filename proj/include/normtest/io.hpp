#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "normtest/nulldist.hpp"
#include "normtest/standardize.hpp"

namespace normtest {

struct CsvOptions {
    char delimiter = ',';
    /// true: first row is a header; false: no header; empty: header iff the first row
    /// contains a non-numeric field.
    std::optional<bool> header;
};

/// Reads a numeric CSV with one observation per row. Quoted fields are accepted.
/// Throws ParseError with the offending line and column on malformed input.
[[nodiscard]] DataMatrix parse_csv(std::istream& in, const CsvOptions& options = {});
[[nodiscard]] DataMatrix read_csv(const std::string& path, const CsvOptions& options = {});

/// Shortest decimal representation that round-trips to the same double.
[[nodiscard]] std::string format_double(double v);

void write_csv(std::ostream& out, const CriticalValueTable& table);
[[nodiscard]] nlohmann::ordered_json to_json(const CriticalValueTable& table);
[[nodiscard]] CriticalValueTable table_from_json(const nlohmann::ordered_json& j);

}  // namespace normtest
