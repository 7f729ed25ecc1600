#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "churn/gbt.hpp"
#include "churn/logistic.hpp"
#include "churn/metrics.hpp"
#include "churn/split.hpp"
#include "churn/table.hpp"
#include "churn/tree.hpp"

namespace churn {

struct ExplainConfig {
    std::size_t background_size = 256;
    std::uint64_t seed = 0;
};

struct RunConfig {
    std::string data_path;
    std::vector<std::string> drop_list = default_drop_list();
    bool allow_missing = false;
    SplitSpec split;
    LogisticConfig logistic;
    TreeConfig tree;
    ForestConfig forest;
    GbtParams gbt;
    ExplainConfig explain;
    std::string out_dir = "out";
    std::size_t threads = 1;  // hint only, never changes results
    int verbosity = 1;
};

// Flat key=value file with dotted sections (gbt.learning_rate=0.15).
RunConfig load_config(const std::string& path);
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

// FNV-1a over the canonical key=value serialization; stamped into every
// output artifact.
std::string config_hash(const RunConfig& config);
std::string canonical_config(const RunConfig& config);

std::uint64_t index_hash(const std::vector<std::size_t>& indices);

struct PreprocessOutput {
    FeatureMatrix X;
    LabelVector y;
    MissingReport missing;
    DuplicateReport duplicates;
};

// preprocess: ingest + checks + feature selection; persists processed
// data, reports, and a manifest under out_dir.
PreprocessOutput cmd_preprocess(const RunConfig& config);

// train: fits one of {logistic, tree, forest, gbt} on the train
// partition and writes models/<name>.model plus a training log.
std::string cmd_train(const RunConfig& config, const std::string& model_name);

struct EvalOutput {
    ClassificationReport report;
    CurvePoints roc;
    CurvePoints pr;
};

// evaluate: held-out metrics, rendered report, ROC/PR point files.
// on_train evaluates the train partition instead; outputs get a .train
// suffix so they cannot be mistaken for test metrics.
EvalOutput cmd_evaluate(const RunConfig& config, const std::string& model_path,
                        bool on_train = false);

struct ComparisonRow {
    std::string name;
    double accuracy;
    double churn_f1;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;  // paper order: LR, DT, RF, XGB
};

ComparisonTable cmd_compare(const RunConfig& config);

struct ExplainOutput {
    double base_value;
    std::vector<std::string> names;
    std::vector<std::pair<std::size_t, double>> summary;  // mean |phi| descending
};

// explain: SHAP attributions for a tree-based model on the test
// partition; rows empty means the Fig.-6 style summary over all rows.
ExplainOutput cmd_explain(const RunConfig& config, const std::string& model_path,
                          const std::vector<std::size_t>& rows, bool summary);

// Reloads the processed matrix written by cmd_preprocess.
std::pair<FeatureMatrix, LabelVector> load_processed(const RunConfig& config);

}  // namespace churn
