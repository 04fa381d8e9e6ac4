#include "ddcor/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ddcor/errors.hpp"

namespace ddcor {

namespace {

struct RawRows {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

RawRows split_records(const std::string& text, char delimiter) {
    RawRows out;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t line = 1;
    std::size_t row_line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        out.rows.push_back(std::move(row));
        out.line_numbers.push_back(row_line);
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (!row_started && !in_quotes) {
            row_started = true;
            row_line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
                if (c == '\n') ++line;
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == delimiter) {
            end_field();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_row();
            ++line;
        } else {
            field += c;
        }
    }
    if (in_quotes) throw parse_error("unterminated quoted field at end of input");
    if (row_started || !field.empty() || !row.empty()) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        end_row();
    }
    return out;
}

} // namespace

Dataset parse_delimited(const std::string& text, char delimiter, bool header) {
    RawRows raw = split_records(text, delimiter);

    // Drop leading comment lines and fully empty records.
    std::size_t first = 0;
    while (first < raw.rows.size()) {
        const auto& r = raw.rows[first];
        const bool comment = !r.empty() && !r[0].empty() && r[0][0] == '#';
        const bool empty = r.size() == 1 && r[0].empty();
        if (comment || empty) {
            ++first;
        } else {
            break;
        }
    }
    if (first >= raw.rows.size()) throw parse_error("input has no data rows");

    Dataset ds;
    ds.had_header = header;
    std::size_t width = 0;
    std::size_t begin = first;
    if (header) {
        ds.columns = raw.rows[first];
        width = ds.columns.size();
        begin = first + 1;
    } else {
        width = raw.rows[first].size();
        for (std::size_t j = 0; j < width; ++j) ds.columns.push_back(std::to_string(j + 1));
    }

    for (std::size_t r = begin; r < raw.rows.size(); ++r) {
        auto& row = raw.rows[r];
        if (row.size() == 1 && row[0].empty()) continue; // stray blank line
        if (row.size() != width) {
            throw parse_error("line " + std::to_string(raw.line_numbers[r]) + ": expected " +
                              std::to_string(width) + " fields, found " +
                              std::to_string(row.size()));
        }
        ds.cells.push_back(std::move(row));
    }
    return ds;
}

Dataset read_delimited(const std::string& path, char delimiter, bool header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_delimited(buf.str(), delimiter, header);
}

std::size_t Dataset::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw config_error("no column named '" + name + "' in input");
}

std::vector<double> Dataset::numeric_column(const std::string& name) const {
    const std::size_t idx = column_index(name);
    std::vector<double> out;
    out.reserve(cells.size());
    for (std::size_t r = 0; r < cells.size(); ++r) {
        const std::string& text = cells[r][idx];
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(text.c_str(), &end);
        const char* tail = end;
        while (tail && (*tail == ' ' || *tail == '\t')) ++tail;
        if (end == text.c_str() || tail == nullptr || *tail != '\0') {
            throw parse_error("column '" + name + "', row " + std::to_string(r + 1) + ": '" +
                              text + "' is not a number");
        }
        if (!std::isfinite(v)) {
            throw parse_error("column '" + name + "', row " + std::to_string(r + 1) +
                              ": non-finite value");
        }
        out.push_back(v);
    }
    return out;
}

RealMatrix Dataset::numeric_columns(const std::vector<std::string>& names) const {
    RealMatrix m(cells.size(), names.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
        const auto col = numeric_column(names[j]);
        for (std::size_t i = 0; i < col.size(); ++i) m(i, j) = col[i];
    }
    return m;
}

void standardize(std::vector<double>& column) {
    const std::size_t n = column.size();
    if (n == 0) return;
    double mean = 0;
    for (double v : column) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0;
    for (double v : column) ss += (v - mean) * (v - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    for (double& v : column) {
        v = sd > 0 ? (v - mean) / sd : 0.0;
    }
}

void standardize_columns(RealMatrix& m) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
        auto col = m.column_values(j);
        standardize(col);
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = col[i];
    }
}

} // namespace ddcor
