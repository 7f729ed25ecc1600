#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "churn/gbt.hpp"
#include "churn/tree.hpp"
#include "churn/types.hpp"

namespace churn {

// Reference rows defining the interventional value function
// v(S) = E_b[f(x_S, b_{S^c})].
struct BackgroundSet {
    FeatureMatrix rows;

    void validate(std::size_t expected_d) const;
};

struct ShapResult {
    double base_value = 0.0;  // expected margin over the background
    std::vector<std::string> names;
    std::vector<double> values;  // n * d attributions, row-major
    std::size_t n = 0;
    std::size_t d = 0;

    double phi(std::size_t i, std::size_t j) const { return values[i * d + j]; }
};

using MarginFn = std::function<double(std::span<const double>)>;

// Classical Shapley formula by full subset enumeration; d is capped at 20.
// Returns (phi, base).
std::pair<std::vector<double>, double> exact_shapley(const MarginFn& predict,
                                                     const BackgroundSet& background,
                                                     std::span<const double> x, std::size_t d);

// Uniform view over the tree-based models: margin(x) = base +
// scale * sum of routed leaf values.
struct TreeEnsembleView {
    const std::vector<Tree>* trees = nullptr;
    double base = 0.0;
    double scale = 1.0;

    double margin(std::span<const double> x) const;
};

TreeEnsembleView ensemble_view(const GbtModel& model);
TreeEnsembleView ensemble_view(const ForestModel& model);
TreeEnsembleView ensemble_view(const std::vector<Tree>& trees, double base = 0.0,
                               double scale = 1.0);

// Interventional TreeSHAP: one tree-path recursion per background row,
// summed over trees. Same value function as exact_shapley.
std::pair<std::vector<double>, double> tree_shap(const TreeEnsembleView& model,
                                                 const BackgroundSet& background,
                                                 std::span<const double> x, std::size_t d);

// Explains each row of X; per-row output equals tree_shap on that row.
ShapResult tree_shap_matrix(const TreeEnsembleView& model, const BackgroundSet& background,
                            const FeatureMatrix& X);

// (feature index, mean |phi|), sorted descending, ties by feature index.
std::vector<std::pair<std::size_t, double>> mean_abs_shap(const ShapResult& result);

struct ForceContribution {
    std::size_t feature;
    double value;
    bool positive;
};

struct ForcePlotData {
    std::vector<ForceContribution> contributions;  // |phi| descending
    double base = 0.0;
    double final_margin = 0.0;
};

ForcePlotData force_plot_data(const ShapResult& result, std::size_t row);

}  // namespace churn
