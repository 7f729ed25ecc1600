#include "churn/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "churn/errors.hpp"
#include "churn/rng.hpp"

namespace churn {

void GbtParams::validate() const {
    auto fraction = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!fraction(colsample_bylevel)) throw ConfigError("colsample_bylevel must be in (0,1]");
    if (!fraction(colsample_bytree)) throw ConfigError("colsample_bytree must be in (0,1]");
    if (!fraction(subsample)) throw ConfigError("subsample must be in (0,1]");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
    if (n_estimators < 1) throw ConfigError("n_estimators must be >= 1");
    if (!(reg_lambda >= 0.0)) throw ConfigError("reg_lambda must be >= 0");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    if (!(scale_pos_weight > 0.0)) throw ConfigError("scale_pos_weight must be > 0");
}

double GbtModel::margin_row(std::span<const double> x) const {
    double m = base_margin;
    for (const Tree& tree : trees) m += tree.predict_row(x);
    return m;
}

std::pair<double, double> grad_hess(int y, double p, double scale_pos_weight) {
    if (!(p > 0.0 && p < 1.0))
        throw NumericError("grad_hess: probability " + std::to_string(p) + " outside (0,1)");
    double g = p - static_cast<double>(y);
    double h = p * (1.0 - p);
    if (y == 1) {
        g *= scale_pos_weight;
        h *= scale_pos_weight;
    }
    return {g, h};
}

double split_gain(double GL, double HL, double GR, double HR, double lambda, double gamma) {
    auto score = [lambda](double G, double H) {
        double denom = H + lambda;
        return denom > 0.0 ? G * G / denom : 0.0;
    };
    return 0.5 * (score(GL, HL) + score(GR, HR) - score(GL + GR, HL + HR)) - gamma;
}

double leaf_weight(double G, double H, double lambda, double max_delta_step) {
    double denom = H + lambda;
    double w = denom > 0.0 ? -G / denom : 0.0;
    if (max_delta_step > 0.0) w = std::clamp(w, -max_delta_step, max_delta_step);
    return w;
}

namespace {

struct GbtSplit {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
    double GL = 0.0, HL = 0.0;
};

GbtSplit best_gbt_split(const FeatureMatrix& X, const std::vector<double>& g,
                        const std::vector<double>& h, const std::vector<std::size_t>& indices,
                        const std::vector<std::size_t>& features, double G, double H,
                        const GbtParams& params) {
    GbtSplit best;
    const std::size_t n = indices.size();
    struct Entry {
        double value, g, h;
        bool operator<(const Entry& o) const { return value < o.value; }
    };
    std::vector<Entry> vals(n);
    for (std::size_t f : features) {
        for (std::size_t k = 0; k < n; ++k)
            vals[k] = {X(indices[k], f), g[indices[k]], h[indices[k]]};
        std::sort(vals.begin(), vals.end());

        double GL = 0.0, HL = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            GL += vals[k].g;
            HL += vals[k].h;
            if (vals[k].value == vals[k + 1].value) continue;
            double threshold = vals[k].value + 0.5 * (vals[k + 1].value - vals[k].value);
            if (!(threshold > vals[k].value)) continue;

            double GR = G - GL, HR = H - HL;
            if (HL < params.min_child_weight || HR < params.min_child_weight) continue;
            double gain = split_gain(GL, HL, GR, HR, params.reg_lambda, params.gamma);
            if (gain <= 0.0) continue;
            if (!best.found || gain > best.gain) best = {true, f, threshold, gain, GL, HL};
        }
    }
    return best;
}

struct GbtTreeBuilder {
    const FeatureMatrix& X;
    const std::vector<double>& g;
    const std::vector<double>& h;
    const GbtParams& params;
    const std::vector<std::vector<std::size_t>>& level_features;  // per depth
    Tree tree;

    int build(std::vector<std::size_t>& indices, std::size_t depth) {
        double G = 0.0, H = 0.0;
        for (std::size_t i : indices) {
            G += g[i];
            H += h[i];
        }

        int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.back().n_samples = indices.size();
        tree.nodes.back().cover = H;

        GbtSplit split;
        if (depth < params.max_depth)
            split = best_gbt_split(X, g, h, indices, level_features[depth], G, H, params);

        if (!split.found) {
            tree.nodes[static_cast<std::size_t>(node_id)].value =
                params.learning_rate *
                leaf_weight(G, H, params.reg_lambda, params.max_delta_step);
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

std::size_t sample_count(double fraction, std::size_t n) {
    if (fraction >= 1.0) return n;
    auto k = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n);
}

}  // namespace

GbtModel fit_gbt(const FeatureMatrix& X, const LabelVector& y, const GbtParams& params) {
    params.validate();
    if (X.n < 2) throw DataError("fit_gbt: need at least 2 rows");
    if (X.n != y.size()) throw DataError("fit_gbt: X and y length mismatch");
    y.validate();

    GbtModel model;
    model.params = params;
    model.base_margin = 0.0;
    model.d = X.d;
    model.trees.reserve(params.n_estimators);

    std::vector<double> margins(X.n, model.base_margin);
    std::vector<double> g(X.n), h(X.n);

    for (std::size_t round = 0; round < params.n_estimators; ++round) {
        for (std::size_t i = 0; i < X.n; ++i) {
            double p = sigmoid(margins[i]);
            auto [gi, hi] = grad_hess(y.y[i], p, params.scale_pos_weight);
            g[i] = gi;
            h[i] = hi;
        }

        SplitMix64 rng(mix_seed(params.seed, round));

        std::vector<std::size_t> rows;
        if (params.subsample < 1.0) {
            rows = sample_without_replacement(X.n, sample_count(params.subsample, X.n), rng);
        } else {
            rows.resize(X.n);
            for (std::size_t i = 0; i < X.n; ++i) rows[i] = i;
        }

        std::vector<std::size_t> tree_cols;
        if (params.colsample_bytree < 1.0)
            tree_cols = sample_without_replacement(X.d, sample_count(params.colsample_bytree, X.d),
                                                   rng);
        else
            for (std::size_t f = 0; f < X.d; ++f) tree_cols.push_back(f);

        // Level column sets are drawn up front so that induction order
        // cannot influence them.
        std::vector<std::vector<std::size_t>> level_features(params.max_depth);
        for (std::size_t depth = 0; depth < params.max_depth; ++depth) {
            if (params.colsample_bylevel < 1.0) {
                auto picks = sample_without_replacement(
                    tree_cols.size(), sample_count(params.colsample_bylevel, tree_cols.size()),
                    rng);
                for (std::size_t p : picks) level_features[depth].push_back(tree_cols[p]);
            } else {
                level_features[depth] = tree_cols;
            }
        }

        GbtTreeBuilder builder{X, g, h, params, level_features, {}};
        builder.build(rows, 0);
        model.trees.push_back(std::move(builder.tree));

        const Tree& tree = model.trees.back();
        for (std::size_t i = 0; i < X.n; ++i) {
            margins[i] += tree.predict_row(X.row(i));
            if (!std::isfinite(margins[i]))
                throw NumericError("fit_gbt: non-finite margin in round " +
                                   std::to_string(round));
        }
    }
    return model;
}

std::vector<double> predict_margin(const GbtModel& model, const FeatureMatrix& X) {
    if (model.d != 0 && X.d != model.d)
        throw DataError("predict_margin: model d=" + std::to_string(model.d) +
                        " vs data d=" + std::to_string(X.d));
    X.validate();
    std::vector<double> out(X.n, model.base_margin);
    for (const Tree& tree : model.trees)
        for (std::size_t i = 0; i < X.n; ++i) out[i] += tree.predict_row(X.row(i));
    return out;
}

std::vector<double> predict_proba_gbt(const GbtModel& model, const FeatureMatrix& X) {
    std::vector<double> out = predict_margin(model, X);
    for (double& v : out) v = sigmoid(v);
    return out;
}

std::map<std::size_t, double> feature_importance(const GbtModel& model, ImportanceKind kind) {
    std::map<std::size_t, double> importance;
    for (std::size_t f = 0; f < model.d; ++f) importance[f] = 0.0;
    for (const Tree& tree : model.trees) {
        for (const TreeNodeData& nd : tree.nodes) {
            if (nd.feature < 0) continue;
            auto f = static_cast<std::size_t>(nd.feature);
            switch (kind) {
                case ImportanceKind::Gain: importance[f] += nd.gain; break;
                case ImportanceKind::Weight: importance[f] += 1.0; break;
                case ImportanceKind::Cover: importance[f] += nd.cover; break;
            }
        }
    }
    return importance;
}

}  // namespace churn
