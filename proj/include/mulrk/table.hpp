#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <istream>
#include <string>
#include <variant>
#include <vector>

namespace mulrk {

/// Empty, floating, integer or text cell.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// Index of `name`, or columns.size() when absent.
    [[nodiscard]] std::size_t column(const std::string& name) const;
};

[[nodiscard]] std::string format_cell(const Cell& c);

/// RFC 4180 CSV with LF line endings; doubles are written as %.17g.
[[nodiscard]] std::string to_csv(const Table& t);

/// Parses CSV written by to_csv (quoted fields allowed). Throws std::invalid_argument on ragged rows.
[[nodiscard]] Table read_csv(std::istream& in);

[[nodiscard]] Cell parse_cell(const std::string& text);

/// Rows as objects keyed by column name; empty cells become null.
[[nodiscard]] nlohmann::json rows_to_json(const Table& t);

} // namespace mulrk
