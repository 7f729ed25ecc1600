#include "churn/table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "churn/errors.hpp"

namespace churn {

const Schema& telco_schema() {
    static const Schema schema = {
        {"State", ColumnKind::Text},
        {"Account Length", ColumnKind::Integer},
        {"Area Code", ColumnKind::Integer},
        {"Phone", ColumnKind::Text},
        {"Intl Plan", ColumnKind::BooleanLike},
        {"VMail Plan", ColumnKind::BooleanLike},
        {"VMail Message", ColumnKind::Integer},
        {"Day Mins", ColumnKind::Real},
        {"Day Calls", ColumnKind::Integer},
        {"Day Charge", ColumnKind::Real},
        {"Eve Mins", ColumnKind::Real},
        {"Eve Calls", ColumnKind::Integer},
        {"Eve Charge", ColumnKind::Real},
        {"Night Mins", ColumnKind::Real},
        {"Night Calls", ColumnKind::Integer},
        {"Night Charge", ColumnKind::Real},
        {"Intl Mins", ColumnKind::Real},
        {"Intl Calls", ColumnKind::Integer},
        {"Intl Charge", ColumnKind::Real},
        {"CustServ Calls", ColumnKind::Integer},
        {"Churn", ColumnKind::BooleanLike},
    };
    return schema;
}

const std::vector<std::string>& default_drop_list() {
    static const std::vector<std::string> drops = {
        "Phone",        "State",       "Day Charge", "Eve Charge",
        "Night Charge", "Intl Charge", "VMail Plan", "VMail Message",
    };
    return drops;
}

namespace {

std::string normalize_name(const std::string& s) {
    std::string out;
    for (char c : s)
        if (std::isalnum(static_cast<unsigned char>(c)))
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

bool is_missing_cell(const std::string& cell) {
    if (cell.empty()) return true;
    std::string n = normalize_name(cell);
    return n == "na" || n == "null" || n == "nan";
}

bool parse_real(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

// yes/no/true/false, case-insensitive, optional trailing period; 0/1 pass
// through so convert_types is idempotent.
bool parse_boolean_like(const std::string& cell, int& out) {
    std::string s = cell;
    if (!s.empty() && s.back() == '.') s.pop_back();
    s = normalize_name(s);
    if (s == "yes" || s == "true" || s == "1") {
        out = 1;
        return true;
    }
    if (s == "no" || s == "false" || s == "0") {
        out = 0;
        return true;
    }
    return false;
}

}  // namespace

std::size_t RawTable::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (columns[j].name == name) return j;
    throw DataError("unknown column: " + name);
}

bool RawTable::has_column(const std::string& name) const {
    for (const auto& c : columns)
        if (c.name == name) return true;
    return false;
}

RawTable load_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file (no header): " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header = split_csv_line(line);
    if (header.size() != schema.size()) {
        throw DataError("header mismatch in " + path + ": expected " +
                        std::to_string(schema.size()) + " columns, found " +
                        std::to_string(header.size()));
    }

    RawTable table;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (normalize_name(header[j]) != normalize_name(schema[j].name))
            throw DataError("header mismatch in " + path + ": column " + std::to_string(j + 1) +
                            " is \"" + header[j] + "\", expected \"" + schema[j].name + "\"");
        table.columns.push_back(schema[j]);
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != table.columns.size())
            throw DataError("row " + std::to_string(line_no) + " in " + path + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(table.columns.size()));
        table.rows.push_back(std::move(cells));
    }

    // Column-name uniqueness is a schema property; check once.
    std::map<std::string, int> seen;
    for (const auto& c : table.columns)
        if (++seen[c.name] > 1) throw DataError("duplicate column name: " + c.name);

    return table;
}

MissingReport check_missing(const RawTable& table) {
    MissingReport report;
    report.counts.reserve(table.n_cols());
    for (std::size_t j = 0; j < table.n_cols(); ++j) {
        std::size_t count = 0;
        for (const auto& row : table.rows)
            if (is_missing_cell(row[j])) ++count;
        report.counts.emplace_back(table.columns[j].name, count);
        report.total += count;
    }
    return report;
}

RawTable convert_types(const RawTable& table) {
    RawTable out = table;
    for (std::size_t j = 0; j < out.n_cols(); ++j) {
        if (out.columns[j].kind != ColumnKind::BooleanLike) continue;
        for (std::size_t i = 0; i < out.rows.size(); ++i) {
            int v;
            if (!parse_boolean_like(out.rows[i][j], v))
                throw DataError("cannot convert cell \"" + out.rows[i][j] + "\" in column " +
                                out.columns[j].name + ", row " + std::to_string(i + 1) +
                                " to 0/1");
            out.rows[i][j] = v ? "1" : "0";
        }
    }
    return out;
}

DuplicateReport check_duplicates(const RawTable& table, const std::string& key_column) {
    std::size_t col = table.column_index(key_column);
    std::map<std::string, std::vector<std::size_t>> by_key;
    for (std::size_t i = 0; i < table.rows.size(); ++i) by_key[table.rows[i][col]].push_back(i);

    DuplicateReport report;
    report.key_column = key_column;
    // Order groups by first occurrence for stable output.
    std::vector<const std::pair<const std::string, std::vector<std::size_t>>*> dup;
    for (const auto& kv : by_key)
        if (kv.second.size() >= 2) dup.push_back(&kv);
    std::sort(dup.begin(), dup.end(),
              [](auto* a, auto* b) { return a->second.front() < b->second.front(); });
    for (auto* kv : dup) report.groups.push_back({kv->first, kv->second});
    return report;
}

std::pair<FeatureMatrix, LabelVector> select_features(const RawTable& table,
                                                      const std::vector<std::string>& drop_list) {
    if (!table.has_column("Churn")) throw DataError("label column Churn not present");
    for (const auto& name : drop_list) {
        if (name == "Churn") throw DataError("drop list must not contain the label column Churn");
        table.column_index(name);  // throws on unknown
    }

    std::size_t label_col = table.column_index("Churn");
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < table.n_cols(); ++j) {
        if (j == label_col) continue;
        if (std::find(drop_list.begin(), drop_list.end(), table.columns[j].name) !=
            drop_list.end())
            continue;
        keep.push_back(j);
    }

    FeatureMatrix X;
    X.d = keep.size();
    X.n = table.n_rows();
    for (std::size_t j : keep) X.names.push_back(table.columns[j].name);
    X.values.reserve(X.n * X.d);

    LabelVector y;
    y.y.reserve(X.n);

    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        for (std::size_t j : keep) {
            double v;
            if (!parse_real(table.rows[i][j], v))
                throw DataError("cannot parse \"" + table.rows[i][j] + "\" in column " +
                                table.columns[j].name + ", row " + std::to_string(i + 1) +
                                " as a number");
            X.values.push_back(v);
        }
        double lv;
        if (!parse_real(table.rows[i][label_col], lv) || (lv != 0.0 && lv != 1.0))
            throw DataError("label cell \"" + table.rows[i][label_col] + "\" in row " +
                            std::to_string(i + 1) + " is not 0/1; run type conversion first");
        y.y.push_back(static_cast<int>(lv));
    }

    X.validate();
    return {std::move(X), std::move(y)};
}

}  // namespace churn
