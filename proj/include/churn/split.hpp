#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "churn/types.hpp"

namespace churn {

struct SplitSpec {
    double train_fraction = 0.7;
    std::uint64_t seed = 0;
    bool stratified = false;
};

struct TrainTestSplit {
    FeatureMatrix train_X, test_X;
    LabelVector train_y, test_y;
    std::vector<std::size_t> train_indices, test_indices;  // original row ids

    std::size_t train_positives() const;
    std::size_t test_positives() const;
};

// Seeded shuffle then cut: train size = round(n * fraction).
TrainTestSplit train_test_split(const FeatureMatrix& X, const LabelVector& y,
                                const SplitSpec& spec);

}  // namespace churn
