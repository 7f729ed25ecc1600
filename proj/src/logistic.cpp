#include "churn/logistic.hpp"

#include <cmath>

#include "churn/errors.hpp"

namespace churn {

namespace {

FeatureMatrix standardize(const FeatureMatrix& X, std::vector<double>& means,
                          std::vector<double>& stds) {
    means.assign(X.d, 0.0);
    stds.assign(X.d, 1.0);
    if (X.n == 0) return X;
    for (std::size_t j = 0; j < X.d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < X.n; ++i) sum += X(i, j);
        means[j] = sum / static_cast<double>(X.n);
        double sq = 0.0;
        for (std::size_t i = 0; i < X.n; ++i) {
            double dlt = X(i, j) - means[j];
            sq += dlt * dlt;
        }
        double sd = std::sqrt(sq / static_cast<double>(X.n));
        stds[j] = sd > 0.0 ? sd : 1.0;
    }
    FeatureMatrix out = X;
    for (std::size_t i = 0; i < X.n; ++i)
        for (std::size_t j = 0; j < X.d; ++j) out(i, j) = (X(i, j) - means[j]) / stds[j];
    return out;
}

double margin(const FeatureMatrix& X, std::size_t i, const std::vector<double>& w, double b) {
    double m = b;
    for (std::size_t j = 0; j < X.d; ++j) m += w[j] * X(i, j);
    return m;
}

}  // namespace

double logistic_loss(const FeatureMatrix& X_std, const LabelVector& y,
                     const std::vector<double>& weights, double bias, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < X_std.n; ++i) {
        double m = margin(X_std, i, weights, bias);
        loss += softplus(m) - static_cast<double>(y.y[i]) * m;
    }
    loss /= static_cast<double>(X_std.n);
    double penalty = 0.0;
    for (double w : weights) penalty += w * w;
    return loss + 0.5 * l2 * penalty;
}

void logistic_gradient(const FeatureMatrix& X_std, const LabelVector& y,
                       const std::vector<double>& weights, double bias, double l2,
                       std::vector<double>& grad_w, double& grad_b) {
    grad_w.assign(X_std.d, 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < X_std.n; ++i) {
        double r = sigmoid(margin(X_std, i, weights, bias)) - static_cast<double>(y.y[i]);
        grad_b += r;
        for (std::size_t j = 0; j < X_std.d; ++j) grad_w[j] += r * X_std(i, j);
    }
    double inv_n = 1.0 / static_cast<double>(X_std.n);
    grad_b *= inv_n;
    for (std::size_t j = 0; j < X_std.d; ++j) grad_w[j] = grad_w[j] * inv_n + l2 * weights[j];
}

LogisticModel fit_logistic(const FeatureMatrix& X, const LabelVector& y,
                           const LogisticConfig& config) {
    if (X.n < 1) throw DataError("fit_logistic: empty training set");
    if (X.n != y.size()) throw DataError("fit_logistic: X and y length mismatch");
    y.validate();

    LogisticModel model;
    model.names = X.names;
    FeatureMatrix Xs = standardize(X, model.means, model.stds);
    model.weights.assign(X.d, 0.0);
    model.bias = 0.0;

    double loss = logistic_loss(Xs, y, model.weights, model.bias, config.l2);
    std::vector<double> grad_w, trial_w(X.d);
    double grad_b = 0.0;

    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        logistic_gradient(Xs, y, model.weights, model.bias, config.l2, grad_w, grad_b);

        double step = config.learning_rate;
        double trial_loss = 0.0;
        double trial_b = 0.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving) {
            for (std::size_t j = 0; j < X.d; ++j)
                trial_w[j] = model.weights[j] - step * grad_w[j];
            trial_b = model.bias - step * grad_b;
            trial_loss = logistic_loss(Xs, y, trial_w, trial_b, config.l2);
            if (std::isfinite(trial_loss) && trial_loss <= loss) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent direction at machine precision
        if (!std::isfinite(trial_loss))
            throw NumericError("fit_logistic: non-finite loss at iteration " +
                               std::to_string(iter));

        double improvement = loss - trial_loss;
        model.weights = trial_w;
        model.bias = trial_b;
        loss = trial_loss;
        if (improvement < config.tolerance) break;
    }
    return model;
}

std::vector<double> predict_proba_logistic(const LogisticModel& model, const FeatureMatrix& X) {
    if (X.d != model.d())
        throw DataError("predict_proba_logistic: model d=" + std::to_string(model.d()) +
                        " vs data d=" + std::to_string(X.d));
    std::vector<double> probs(X.n);
    for (std::size_t i = 0; i < X.n; ++i) {
        double m = model.bias;
        for (std::size_t j = 0; j < X.d; ++j)
            m += model.weights[j] * (X(i, j) - model.means[j]) / model.stds[j];
        probs[i] = sigmoid(m);
    }
    return probs;
}

}  // namespace churn
