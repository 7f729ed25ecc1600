#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "churn/rng.hpp"
#include "churn/types.hpp"

namespace churn {

// Flat tree; node 0 is the root. Routing is strictly "left iff
// x[feature] < threshold", equality goes right.
struct TreeNodeData {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf payload (class-1 probability or margin step)
    double gain = 0.0;   // split gain, 0 at leaves
    std::size_t n_samples = 0;
    double cover = 0.0;  // row count for classification trees, sum of h for boosted ones
};

struct Tree {
    std::vector<TreeNodeData> nodes;

    bool empty() const { return nodes.empty(); }

    int route(std::span<const double> x) const;         // leaf node index
    double predict_row(std::span<const double> x) const;
};

struct TreeConfig {
    std::size_t max_depth = 8;
    std::size_t min_samples_leaf = 5;
    std::size_t mtry = 0;  // 0 = all features
};

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t mtry = 0;  // 0 = ceil(sqrt(d))
    std::size_t max_depth = 12;
    std::size_t min_samples_leaf = 5;
    std::uint64_t seed = 0;
    bool bootstrap = true;
};

struct ForestModel {
    std::vector<Tree> trees;
    ForestConfig config;
};

// 1 - sum p_k^2 over the class counts.
double gini(std::span<const std::size_t> counts);

// Greedy CART growth on the Gini criterion. Candidate thresholds are
// midpoints of consecutive distinct sorted values; ties in impurity
// decrease break toward the lowest feature index, then lowest threshold.
// Zero-gain splits of impure nodes are taken (needed to unwind parity
// patterns like XOR at depth 2).
Tree fit_tree(const FeatureMatrix& X, const LabelVector& y, const TreeConfig& config,
              SplitMix64* mtry_rng = nullptr);

ForestModel fit_forest(const FeatureMatrix& X, const LabelVector& y, const ForestConfig& config);

std::vector<double> predict_tree(const Tree& tree, const FeatureMatrix& X);
std::vector<double> predict_forest(const ForestModel& model, const FeatureMatrix& X);

}  // namespace churn
