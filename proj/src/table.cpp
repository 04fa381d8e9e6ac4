#include "ddcor/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "ddcor/csv.hpp"
#include "ddcor/errors.hpp"

namespace ddcor {

void Table::set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : metadata) {
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    }
    metadata.emplace_back(key, value);
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw invalid_input_error("table row width does not match column count");
    }
    rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw config_error("table has no column named '" + name + "'");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string cell_text(const Cell& cell) {
    if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
    if (std::holds_alternative<std::int64_t>(cell)) {
        return std::to_string(std::get<std::int64_t>(cell));
    }
    return std::get<std::string>(cell);
}

std::string csv_escape(const std::string& field) {
    const bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

} // namespace

std::string to_csv(const Table& table) {
    std::ostringstream out;
    for (const auto& [key, value] : table.metadata) {
        out << "# " << key << "=" << value << "\n";
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(table.columns[i]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(cell_text(row[i]));
        }
        out << '\n';
    }
    return out.str();
}

std::string to_json(const Table& table) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.metadata) meta[key] = value;
    j["metadata"] = std::move(meta);
    j["columns"] = table.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& cell = row[i];
            if (std::holds_alternative<double>(cell)) {
                obj[table.columns[i]] = std::get<double>(cell);
            } else if (std::holds_alternative<std::int64_t>(cell)) {
                obj[table.columns[i]] = std::get<std::int64_t>(cell);
            } else {
                obj[table.columns[i]] = std::get<std::string>(cell);
            }
        }
        rows.push_back(std::move(obj));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

namespace {

Cell cell_from_text(const std::string& text) {
    if (text.empty()) return text;
    char* end = nullptr;
    if (text.find_first_of(".eEnN") == std::string::npos) {
        errno = 0;
        const long long i = std::strtoll(text.c_str(), &end, 10);
        if (end != text.c_str() && *end == '\0' && errno == 0) {
            return static_cast<std::int64_t>(i);
        }
    }
    end = nullptr;
    const double d = std::strtod(text.c_str(), &end);
    if (end != text.c_str() && *end == '\0') return d;
    return text;
}

} // namespace

Table table_from_csv(const std::string& text) {
    Table table;
    std::string body;
    body.reserve(text.size());
    std::istringstream lines(text);
    std::string line;
    bool in_header_comments = true;
    while (std::getline(lines, line)) {
        if (in_header_comments && !line.empty() && line.front() == '#') {
            std::string meta = line.substr(1);
            if (!meta.empty() && meta.front() == ' ') meta.erase(0, 1);
            const auto eq = meta.find('=');
            if (eq == std::string::npos) {
                table.metadata.emplace_back(meta, "");
            } else {
                table.metadata.emplace_back(meta.substr(0, eq), meta.substr(eq + 1));
            }
            continue;
        }
        in_header_comments = false;
        body += line;
        body += '\n';
    }
    const Dataset parsed = parse_delimited(body, ',', true);
    table.columns = parsed.columns;
    for (const auto& row : parsed.cells) {
        std::vector<Cell> cells;
        cells.reserve(row.size());
        for (const auto& c : row) cells.push_back(cell_from_text(c));
        table.rows.push_back(std::move(cells));
    }
    return table;
}

Table pivot_wide(const Table& table, const std::vector<std::string>& index_cols,
                 const std::string& names_from, const std::string& values_from) {
    std::vector<std::size_t> index_idx;
    for (const auto& name : index_cols) index_idx.push_back(table.column_index(name));
    const std::size_t names_idx = table.column_index(names_from);
    const std::size_t values_idx = table.column_index(values_from);

    std::vector<std::string> wide_names; // first-seen order
    auto name_position = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < wide_names.size(); ++i) {
            if (wide_names[i] == name) return i;
        }
        wide_names.push_back(name);
        return wide_names.size() - 1;
    };

    std::vector<std::vector<Cell>> keys;  // group keys, first-seen order
    std::vector<std::vector<Cell>> cells; // spread values per group
    auto group_position = [&](const std::vector<Cell>& key) -> std::size_t {
        for (std::size_t g = 0; g < keys.size(); ++g) {
            if (keys[g] == key) return g;
        }
        keys.push_back(key);
        cells.emplace_back();
        return keys.size() - 1;
    };

    for (const auto& row : table.rows) {
        std::vector<Cell> key;
        for (std::size_t idx : index_idx) key.push_back(row[idx]);
        const std::size_t g = group_position(key);
        const std::size_t c = name_position(cell_text(row[names_idx]));
        if (cells[g].size() <= c) cells[g].resize(c + 1, std::string());
        cells[g][c] = row[values_idx];
    }

    Table wide;
    wide.metadata = table.metadata;
    wide.columns = index_cols;
    for (const auto& name : wide_names) wide.columns.push_back(name);
    for (std::size_t g = 0; g < keys.size(); ++g) {
        std::vector<Cell> row = keys[g];
        cells[g].resize(wide_names.size(), std::string());
        for (auto& v : cells[g]) row.push_back(v);
        wide.rows.push_back(std::move(row));
    }
    return wide;
}

} // namespace ddcor
