#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "churn/types.hpp"

namespace churn {

enum class ColumnKind { Text, Integer, Real, BooleanLike };

struct ColumnSpec {
    std::string name;
    ColumnKind kind;
};

using Schema = std::vector<ColumnSpec>;

// The 21 telco churn columns in file order.
const Schema& telco_schema();

struct RawTable {
    std::vector<ColumnSpec> columns;
    std::vector<std::vector<std::string>> rows;  // rows[i].size() == columns.size()

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return columns.size(); }

    // Index of a column by name, or throws DataError.
    std::size_t column_index(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

struct MissingReport {
    std::vector<std::pair<std::string, std::size_t>> counts;  // column order
    std::size_t total = 0;
};

struct DuplicateGroup {
    std::string key;
    std::vector<std::size_t> row_indices;
};

struct DuplicateReport {
    std::string key_column;
    std::vector<DuplicateGroup> groups;  // only keys with count >= 2
};

// CSV with header row; cell kinds taken from the schema, matched by
// normalized header name (case/punctuation-insensitive, so "Int'l Plan"
// and "Churn?" match "Intl Plan" / "Churn").
RawTable load_csv(const std::string& path, const Schema& schema);

MissingReport check_missing(const RawTable& table);

// Maps yes/no/true/false (case-insensitive, optional trailing '.') to 1/0
// in boolean-like columns; idempotent on already-converted tables.
RawTable convert_types(const RawTable& table);

DuplicateReport check_duplicates(const RawTable& table, const std::string& key_column);

const std::vector<std::string>& default_drop_list();

// Drops drop_list plus the Churn label column; every remaining column must
// parse numerically. Column order is preserved.
std::pair<FeatureMatrix, LabelVector> select_features(const RawTable& table,
                                                      const std::vector<std::string>& drop_list);

}  // namespace churn
