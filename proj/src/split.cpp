#include "churn/split.hpp"

#include <cmath>

#include "churn/errors.hpp"
#include "churn/rng.hpp"

namespace churn {

namespace {

FeatureMatrix gather(const FeatureMatrix& X, const std::vector<std::size_t>& idx) {
    FeatureMatrix out;
    out.names = X.names;
    out.d = X.d;
    out.n = idx.size();
    out.values.reserve(out.n * out.d);
    for (std::size_t i : idx) {
        auto r = X.row(i);
        out.values.insert(out.values.end(), r.begin(), r.end());
    }
    return out;
}

LabelVector gather(const LabelVector& y, const std::vector<std::size_t>& idx) {
    LabelVector out;
    out.y.reserve(idx.size());
    for (std::size_t i : idx) out.y.push_back(y.y[i]);
    return out;
}

}  // namespace

std::size_t TrainTestSplit::train_positives() const {
    std::size_t c = 0;
    for (int v : train_y.y) c += static_cast<std::size_t>(v);
    return c;
}

std::size_t TrainTestSplit::test_positives() const {
    std::size_t c = 0;
    for (int v : test_y.y) c += static_cast<std::size_t>(v);
    return c;
}

TrainTestSplit train_test_split(const FeatureMatrix& X, const LabelVector& y,
                                const SplitSpec& spec) {
    if (X.n != y.size()) throw DataError("train_test_split: X and y length mismatch");
    if (X.n < 2) throw DataError("train_test_split: need at least 2 rows");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ConfigError("train_fraction must be in (0,1)");

    TrainTestSplit split;
    if (!spec.stratified) {
        std::vector<std::size_t> idx(X.n);
        for (std::size_t i = 0; i < X.n; ++i) idx[i] = i;
        SplitMix64 rng(spec.seed);
        fisher_yates(idx, rng);
        auto n_train = static_cast<std::size_t>(
            std::lround(static_cast<double>(X.n) * spec.train_fraction));
        if (n_train == 0) n_train = 1;
        if (n_train == X.n) n_train = X.n - 1;
        split.train_indices.assign(idx.begin(), idx.begin() + static_cast<long>(n_train));
        split.test_indices.assign(idx.begin() + static_cast<long>(n_train), idx.end());
    } else {
        // Shuffle and cut each class separately, preserving the class mix.
        for (int cls : {0, 1}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < X.n; ++i)
                if (y.y[i] == cls) idx.push_back(i);
            SplitMix64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(cls)));
            fisher_yates(idx, rng);
            auto n_train = static_cast<std::size_t>(
                std::lround(static_cast<double>(idx.size()) * spec.train_fraction));
            for (std::size_t i = 0; i < idx.size(); ++i)
                (i < n_train ? split.train_indices : split.test_indices).push_back(idx[i]);
        }
        // Per-class rounding can empty a partition on tiny inputs; move one
        // row so both sides stay non-empty.
        if (split.train_indices.empty()) {
            split.train_indices.push_back(split.test_indices.back());
            split.test_indices.pop_back();
        }
        if (split.test_indices.empty()) {
            split.test_indices.push_back(split.train_indices.back());
            split.train_indices.pop_back();
        }
    }

    split.train_X = gather(X, split.train_indices);
    split.train_y = gather(y, split.train_indices);
    split.test_X = gather(X, split.test_indices);
    split.test_y = gather(y, split.test_indices);
    return split;
}

}  // namespace churn
