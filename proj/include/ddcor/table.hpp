#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ddcor {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Long-format result table: named columns, one observation per row, plus an
/// ordered metadata block describing how the table was produced.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void set_meta(const std::string& key, const std::string& value);
    void add_row(std::vector<Cell> row);
    std::size_t column_index(const std::string& name) const; // throws config_error
};

/// 17-significant-digit decimal form; round-trips through strtod.
std::string format_double(double v);

/// RFC-4180-style CSV with `# key=value` metadata lines before the header.
std::string to_csv(const Table& table);
/// {"metadata": {...}, "columns": [...], "rows": [{...}, ...]}
std::string to_json(const Table& table);

/// Parses to_csv output back; numeric-looking cells become doubles (integers
/// with no decimal point become int64).
Table table_from_csv(const std::string& text);

/// Spreads `values_from` into one column per distinct value of `names_from`,
/// grouping rows by `index_cols` (first-seen order). Reproduces wide layouts
/// from long tables.
Table pivot_wide(const Table& table, const std::vector<std::string>& index_cols,
                 const std::string& names_from, const std::string& values_from);

} // namespace ddcor
