#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "churn/errors.hpp"

namespace churn {

// Dense row-major numeric matrix with named columns.
struct FeatureMatrix {
    std::vector<std::string> names;
    std::vector<double> values;  // n * d, row-major
    std::size_t n = 0;
    std::size_t d = 0;

    double operator()(std::size_t i, std::size_t j) const { return values[i * d + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values[i * d + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values.data() + i * d, d);
    }

    void validate() const {
        if (names.size() != d)
            throw DataError("feature matrix: " + std::to_string(names.size()) +
                            " names for d=" + std::to_string(d));
        if (values.size() != n * d) throw DataError("feature matrix: value count mismatch");
        for (double v : values)
            if (!std::isfinite(v)) throw DataError("feature matrix: non-finite value");
    }
};

// Binary labels, 1 = churn.
struct LabelVector {
    std::vector<int> y;

    std::size_t size() const { return y.size(); }

    void validate() const {
        for (int v : y)
            if (v != 0 && v != 1) throw DataError("label vector: entry not in {0,1}");
    }
};

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
inline double softplus(double z) {
    if (z > 0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

}  // namespace churn
