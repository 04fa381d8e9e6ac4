#pragma once

#include <string>
#include <vector>

#include "ddcor/matrix.hpp"

namespace ddcor {

/// A parsed delimited file: column names (synthesized "1", "2", ... when the
/// file has no header row) and raw string cells. Referenced columns are
/// converted to numbers on demand so non-numeric id columns can ride along.
struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> cells; // row-major
    bool had_header = false;

    std::size_t n() const { return cells.size(); }
    /// Throws config_error naming the column when absent.
    std::size_t column_index(const std::string& name) const;
    /// Parses one column to finite doubles; throws parse_error with row
    /// diagnostics on failure.
    std::vector<double> numeric_column(const std::string& name) const;
    RealMatrix numeric_columns(const std::vector<std::string>& names) const;
};

/// RFC-4180-style reader: quoted fields, doubled quotes, CR/LF tolerant.
/// Lines starting with '#' before the header are skipped as comments.
Dataset read_delimited(const std::string& path, char delimiter = ',', bool header = true);
Dataset parse_delimited(const std::string& text, char delimiter = ',', bool header = true);

/// In-place column standardization: subtract the mean, divide by the sample
/// standard deviation (n-1). Constant columns become all zeros.
void standardize(std::vector<double>& column);
void standardize_columns(RealMatrix& m);

} // namespace ddcor
