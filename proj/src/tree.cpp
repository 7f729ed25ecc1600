#include "churn/tree.hpp"

#include <algorithm>
#include <cmath>

#include "churn/errors.hpp"

namespace churn {

int Tree::route(std::span<const double> x) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const TreeNodeData& nd = nodes[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right;
    }
    return node;
}

double Tree::predict_row(std::span<const double> x) const {
    return nodes[static_cast<std::size_t>(route(x))].value;
}

double gini(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    if (total == 0) throw DataError("gini: all-zero counts");
    double sum_sq = 0.0;
    for (std::size_t c : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

double node_gini(std::size_t pos, std::size_t n) {
    std::size_t counts[2] = {n - pos, pos};
    return gini(std::span<const std::size_t>(counts, 2));
}

// Best Gini split over the allowed features; features are scanned in
// ascending index order and only strictly better gains replace the
// incumbent, which realizes the (feature, threshold) tie-break.
SplitChoice best_gini_split(const FeatureMatrix& X, const LabelVector& y,
                            const std::vector<std::size_t>& indices,
                            const std::vector<std::size_t>& features,
                            std::size_t min_samples_leaf) {
    const std::size_t n = indices.size();
    std::size_t pos_total = 0;
    for (std::size_t i : indices) pos_total += static_cast<std::size_t>(y.y[i]);
    const double parent = node_gini(pos_total, n);

    SplitChoice best;
    std::vector<std::pair<double, int>> vals(n);
    for (std::size_t f : features) {
        for (std::size_t k = 0; k < n; ++k)
            vals[k] = {X(indices[k], f), y.y[indices[k]]};
        std::sort(vals.begin(), vals.end());

        std::size_t left_n = 0, left_pos = 0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            left_n += 1;
            left_pos += static_cast<std::size_t>(vals[k].second);
            if (vals[k].first == vals[k + 1].first) continue;
            if (left_n < min_samples_leaf || n - left_n < min_samples_leaf) continue;

            double threshold = vals[k].first + 0.5 * (vals[k + 1].first - vals[k].first);
            if (!(threshold > vals[k].first)) continue;  // values too close to separate

            std::size_t right_n = n - left_n;
            std::size_t right_pos = pos_total - left_pos;
            double weighted = (static_cast<double>(left_n) * node_gini(left_pos, left_n) +
                               static_cast<double>(right_n) * node_gini(right_pos, right_n)) /
                              static_cast<double>(n);
            double gain = parent - weighted;
            if (!best.found || gain > best.gain) {
                best = {true, f, threshold, gain};
            }
        }
    }
    return best;
}

struct TreeBuilder {
    const FeatureMatrix& X;
    const LabelVector& y;
    const TreeConfig& config;
    SplitMix64* mtry_rng;
    Tree tree;

    int build(std::vector<std::size_t>& indices, std::size_t depth) {
        const std::size_t n = indices.size();
        std::size_t pos = 0;
        for (std::size_t i : indices) pos += static_cast<std::size_t>(y.y[i]);

        int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.back().n_samples = n;
        tree.nodes.back().cover = static_cast<double>(n);

        bool pure = (pos == 0 || pos == n);
        if (pure || depth >= config.max_depth || n < 2 * config.min_samples_leaf) {
            tree.nodes[static_cast<std::size_t>(node_id)].value =
                static_cast<double>(pos) / static_cast<double>(n);
            return node_id;
        }

        std::vector<std::size_t> features;
        if (config.mtry > 0 && config.mtry < X.d && mtry_rng)
            features = sample_without_replacement(X.d, config.mtry, *mtry_rng);
        else
            for (std::size_t f = 0; f < X.d; ++f) features.push_back(f);

        SplitChoice split = best_gini_split(X, y, indices, features, config.min_samples_leaf);
        // Zero-gain splits of impure nodes are still taken; without them a
        // parity pattern (XOR) can never be unwound at depth 2.
        if (!split.found || split.gain < 0.0) {
            tree.nodes[static_cast<std::size_t>(node_id)].value =
                static_cast<double>(pos) / static_cast<double>(n);
            return node_id;
        }

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : indices)
            (X(i, split.feature) < split.threshold ? left_idx : right_idx).push_back(i);
        indices.clear();
        indices.shrink_to_fit();

        int left = build(left_idx, depth + 1);
        int right = build(right_idx, depth + 1);

        TreeNodeData& nd = tree.nodes[static_cast<std::size_t>(node_id)];
        nd.feature = static_cast<int>(split.feature);
        nd.threshold = split.threshold;
        nd.gain = split.gain;
        nd.left = left;
        nd.right = right;
        return node_id;
    }
};

}  // namespace

Tree fit_tree(const FeatureMatrix& X, const LabelVector& y, const TreeConfig& config,
              SplitMix64* mtry_rng) {
    if (X.n < 1) throw DataError("fit_tree: empty training set");
    if (X.n != y.size()) throw DataError("fit_tree: X and y length mismatch");
    y.validate();

    TreeBuilder builder{X, y, config, mtry_rng, {}};
    std::vector<std::size_t> indices(X.n);
    for (std::size_t i = 0; i < X.n; ++i) indices[i] = i;
    builder.build(indices, 0);
    return std::move(builder.tree);
}

ForestModel fit_forest(const FeatureMatrix& X, const LabelVector& y, const ForestConfig& config) {
    if (X.n < 2) throw DataError("fit_forest: need at least 2 rows");
    if (config.n_trees < 1) throw ConfigError("fit_forest: n_trees must be >= 1");
    std::size_t mtry = config.mtry;
    if (mtry == 0)
        mtry = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(X.d))));
    if (mtry > X.d) throw ConfigError("fit_forest: mtry exceeds feature count");

    ForestModel model;
    model.config = config;
    model.config.mtry = mtry;
    model.trees.reserve(config.n_trees);

    TreeConfig tree_config;
    tree_config.max_depth = config.max_depth;
    tree_config.min_samples_leaf = config.min_samples_leaf;
    tree_config.mtry = mtry;

    // Each tree's randomness comes only from its own derived seed, so a
    // parallel build would be bit-identical to this loop.
    for (std::size_t t = 0; t < config.n_trees; ++t) {
        SplitMix64 rng(mix_seed(config.seed, t));
        FeatureMatrix Xb;
        LabelVector yb;
        if (config.bootstrap) {
            Xb.names = X.names;
            Xb.d = X.d;
            Xb.n = X.n;
            Xb.values.reserve(X.n * X.d);
            yb.y.reserve(X.n);
            for (std::size_t i = 0; i < X.n; ++i) {
                std::size_t pick = static_cast<std::size_t>(rng.below(X.n));
                auto r = X.row(pick);
                Xb.values.insert(Xb.values.end(), r.begin(), r.end());
                yb.y.push_back(y.y[pick]);
            }
            model.trees.push_back(fit_tree(Xb, yb, tree_config, &rng));
        } else {
            model.trees.push_back(fit_tree(X, y, tree_config, &rng));
        }
    }
    return model;
}

namespace {

void check_dims(const Tree& tree, const FeatureMatrix& X) {
    for (const TreeNodeData& nd : tree.nodes)
        if (nd.feature >= 0 && static_cast<std::size_t>(nd.feature) >= X.d)
            throw DataError("predict: tree references feature " + std::to_string(nd.feature) +
                            " but data has d=" + std::to_string(X.d));
}

}  // namespace

std::vector<double> predict_tree(const Tree& tree, const FeatureMatrix& X) {
    X.validate();
    check_dims(tree, X);
    std::vector<double> out(X.n);
    for (std::size_t i = 0; i < X.n; ++i) out[i] = tree.predict_row(X.row(i));
    return out;
}

std::vector<double> predict_forest(const ForestModel& model, const FeatureMatrix& X) {
    X.validate();
    for (const Tree& tree : model.trees) check_dims(tree, X);
    std::vector<double> out(X.n, 0.0);
    for (const Tree& tree : model.trees)
        for (std::size_t i = 0; i < X.n; ++i) out[i] += tree.predict_row(X.row(i));
    double inv = 1.0 / static_cast<double>(model.trees.size());
    for (double& v : out) v *= inv;
    return out;
}

}  // namespace churn
