#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "churn/tree.hpp"
#include "churn/types.hpp"

namespace churn {

// Binary-logistic boosted trees. Defaults follow the tuned values used
// throughout the pipeline.
struct GbtParams {
    double colsample_bylevel = 0.7;
    double colsample_bytree = 0.8;
    double learning_rate = 0.15;
    double gamma = 1.0;
    std::size_t max_depth = 4;
    double max_delta_step = 3.0;
    double min_child_weight = 1.0;
    std::size_t n_estimators = 50;
    double reg_lambda = 10.0;
    double scale_pos_weight = 1.5;
    double subsample = 0.9;
    std::uint64_t seed = 0;

    void validate() const;
};

// Leaf values already include the learning rate, so the margin is just
// base_margin plus the routed leaf values.
struct GbtModel {
    std::vector<Tree> trees;
    double base_margin = 0.0;  // logit of base score 0.5
    GbtParams params;
    std::size_t d = 0;

    double margin_row(std::span<const double> x) const;
};

// Gradient/hessian of the logistic loss in margin space; positive-class
// rows are scaled by scale_pos_weight.
std::pair<double, double> grad_hess(int y, double p, double scale_pos_weight);

double split_gain(double GL, double HL, double GR, double HR, double lambda, double gamma);

// -G/(H+lambda), clipped to [-max_delta_step, +max_delta_step] when
// max_delta_step > 0.
double leaf_weight(double G, double H, double lambda, double max_delta_step);

GbtModel fit_gbt(const FeatureMatrix& X, const LabelVector& y, const GbtParams& params);

std::vector<double> predict_margin(const GbtModel& model, const FeatureMatrix& X);
std::vector<double> predict_proba_gbt(const GbtModel& model, const FeatureMatrix& X);

enum class ImportanceKind { Gain, Weight, Cover };

// Per-feature importance; unused features map to 0.
std::map<std::size_t, double> feature_importance(const GbtModel& model, ImportanceKind kind);

}  // namespace churn
