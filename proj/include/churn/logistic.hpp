#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "churn/types.hpp"

namespace churn {

struct LogisticConfig {
    double learning_rate = 0.1;
    std::size_t max_iters = 500;
    double l2 = 1e-4;
    double tolerance = 1e-8;
};

// Weights act on standardized features; the fit-time (mean, std) pairs are
// part of the model.
struct LogisticModel {
    std::vector<std::string> names;
    std::vector<double> means;
    std::vector<double> stds;  // constant columns use 1
    std::vector<double> weights;
    double bias = 0.0;

    std::size_t d() const { return weights.size(); }
};

// Mean log-loss + (l2/2)*||w||^2 on standardized features (bias excluded
// from the penalty).
double logistic_loss(const FeatureMatrix& X_std, const LabelVector& y,
                     const std::vector<double>& weights, double bias, double l2);

void logistic_gradient(const FeatureMatrix& X_std, const LabelVector& y,
                       const std::vector<double>& weights, double bias, double l2,
                       std::vector<double>& grad_w, double& grad_b);

// Full-batch gradient descent; the step is halved whenever it would
// increase the loss, and restored each iteration.
LogisticModel fit_logistic(const FeatureMatrix& X, const LabelVector& y,
                           const LogisticConfig& config);

std::vector<double> predict_proba_logistic(const LogisticModel& model, const FeatureMatrix& X);

}  // namespace churn
