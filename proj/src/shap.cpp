#include "churn/shap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "churn/errors.hpp"

namespace churn {

void BackgroundSet::validate(std::size_t expected_d) const {
    if (rows.n == 0) throw DataError("background set is empty");
    if (rows.d != expected_d)
        throw DataError("background d=" + std::to_string(rows.d) + " vs instance d=" +
                        std::to_string(expected_d));
}

double TreeEnsembleView::margin(std::span<const double> x) const {
    double m = base;
    for (const Tree& tree : *trees) m += scale * tree.predict_row(x);
    return m;
}

TreeEnsembleView ensemble_view(const GbtModel& model) {
    return {&model.trees, model.base_margin, 1.0};
}

TreeEnsembleView ensemble_view(const ForestModel& model) {
    return {&model.trees, 0.0, 1.0 / static_cast<double>(model.trees.size())};
}

TreeEnsembleView ensemble_view(const std::vector<Tree>& trees, double base, double scale) {
    return {&trees, base, scale};
}

namespace {

constexpr std::size_t kExactGuard = 20;

std::vector<std::vector<double>> shapley_weight_table(std::size_t d) {
    // W[a][m] = a! * (m-a)! / (m+1)!   for 0 <= a <= m < d
    std::vector<double> fact(d + 2, 1.0);
    for (std::size_t i = 1; i < fact.size(); ++i)
        fact[i] = fact[i - 1] * static_cast<double>(i);
    std::vector<std::vector<double>> W(d, std::vector<double>(d, 0.0));
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t a = 0; a <= m; ++a) W[a][m] = fact[a] * fact[m - a] / fact[m + 1];
    return W;
}

// Recursion over one tree for one (instance, reference) pair. At each
// node where x and z diverge on a new feature f, both constrained
// branches are explored and f's attribution picks up the difference of
// the returned leaf-weight sums.
struct TreePathWalker {
    const Tree& tree;
    std::span<const double> x;
    std::span<const double> z;
    const std::vector<std::vector<double>>& W;
    std::vector<double>& phi;  // accumulated, caller scales
    std::vector<signed char>& constraint;  // 0 free, +1 follow x, -1 follow z

    // Returns (pos, neg): sums over reachable leaves of
    // (a-1)! b! / (a+b)! * value  and  a! (b-1)! / (a+b)! * value.
    std::pair<double, double> walk(int node, std::size_t a, std::size_t b) {
        const TreeNodeData& nd = tree.nodes[static_cast<std::size_t>(node)];
        if (nd.feature < 0) {
            std::size_t m = a + b;
            double pos = (a > 0) ? W[a - 1][m - 1] * nd.value : 0.0;
            double neg = (b > 0) ? W[a][m - 1] * nd.value : 0.0;
            return {pos, neg};
        }

        auto f = static_cast<std::size_t>(nd.feature);
        int x_child = x[f] < nd.threshold ? nd.left : nd.right;
        int z_child = z[f] < nd.threshold ? nd.left : nd.right;

        if (x_child == z_child) return walk(x_child, a, b);
        if (constraint[f] == +1) return walk(x_child, a, b);
        if (constraint[f] == -1) return walk(z_child, a, b);

        constraint[f] = +1;
        auto [pos_x, neg_x] = walk(x_child, a + 1, b);
        constraint[f] = -1;
        auto [pos_z, neg_z] = walk(z_child, a, b + 1);
        constraint[f] = 0;

        phi[f] += pos_x - neg_z;
        return {pos_x + pos_z, neg_x + neg_z};
    }
};

}  // namespace

std::pair<std::vector<double>, double> exact_shapley(const MarginFn& predict,
                                                     const BackgroundSet& background,
                                                     std::span<const double> x, std::size_t d) {
    if (d > kExactGuard)
        throw ConfigError("exact_shapley: d=" + std::to_string(d) + " exceeds the 2^d guard (" +
                          std::to_string(kExactGuard) + ")");
    background.validate(d);
    if (x.size() != d) throw DataError("exact_shapley: instance length mismatch");

    const std::size_t n_masks = std::size_t{1} << d;
    std::vector<double> v(n_masks, 0.0);
    std::vector<double> composite(d);
    for (std::size_t bi = 0; bi < background.rows.n; ++bi) {
        auto bg = background.rows.row(bi);
        for (std::size_t mask = 0; mask < n_masks; ++mask) {
            for (std::size_t j = 0; j < d; ++j)
                composite[j] = (mask >> j) & 1 ? x[j] : bg[j];
            v[mask] += predict(composite);
        }
    }
    for (double& val : v) val /= static_cast<double>(background.rows.n);

    std::vector<double> fact(d + 1, 1.0);
    for (std::size_t i = 1; i <= d; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);

    std::vector<double> phi(d, 0.0);
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
        auto s = static_cast<std::size_t>(std::popcount(mask));
        for (std::size_t j = 0; j < d; ++j) {
            if ((mask >> j) & 1) continue;
            double weight = fact[s] * fact[d - s - 1] / fact[d];
            phi[j] += weight * (v[mask | (std::size_t{1} << j)] - v[mask]);
        }
    }
    return {std::move(phi), v[0]};
}

std::pair<std::vector<double>, double> tree_shap(const TreeEnsembleView& model,
                                                 const BackgroundSet& background,
                                                 std::span<const double> x, std::size_t d) {
    background.validate(d);
    if (x.size() != d) throw DataError("tree_shap: instance length mismatch");
    if (model.trees == nullptr) throw ConfigError("tree_shap: model has no tree structure");

    auto W = shapley_weight_table(std::max<std::size_t>(d, 1));
    std::vector<double> phi(d, 0.0);
    std::vector<signed char> constraint(d, 0);
    double base = model.base * static_cast<double>(background.rows.n);

    for (std::size_t bi = 0; bi < background.rows.n; ++bi) {
        auto z = background.rows.row(bi);
        for (const Tree& tree : *model.trees) {
            if (tree.empty()) continue;
            base += model.scale * tree.predict_row(z);
            TreePathWalker walker{tree, x, z, W, phi, constraint};
            walker.walk(0, 0, 0);
        }
    }

    double inv = 1.0 / static_cast<double>(background.rows.n);
    for (double& p : phi) p *= model.scale * inv;
    return {std::move(phi), base * inv};
}

ShapResult tree_shap_matrix(const TreeEnsembleView& model, const BackgroundSet& background,
                            const FeatureMatrix& X) {
    if (X.n < 1) throw DataError("tree_shap_matrix: no rows to explain");
    ShapResult result;
    result.names = X.names;
    result.n = X.n;
    result.d = X.d;
    result.values.reserve(X.n * X.d);
    for (std::size_t i = 0; i < X.n; ++i) {
        auto [phi, base] = tree_shap(model, background, X.row(i), X.d);
        result.base_value = base;
        result.values.insert(result.values.end(), phi.begin(), phi.end());
    }
    return result;
}

std::vector<std::pair<std::size_t, double>> mean_abs_shap(const ShapResult& result) {
    if (result.n < 1) throw DataError("mean_abs_shap: empty result");
    std::vector<std::pair<std::size_t, double>> means(result.d);
    for (std::size_t j = 0; j < result.d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < result.n; ++i) sum += std::abs(result.phi(i, j));
        means[j] = {j, sum / static_cast<double>(result.n)};
    }
    std::stable_sort(means.begin(), means.end(), [](const auto& a, const auto& b) {
        return a.second > b.second;  // stable keeps index order among ties
    });
    return means;
}

ForcePlotData force_plot_data(const ShapResult& result, std::size_t row) {
    if (row >= result.n) throw DataError("force_plot_data: row out of range");
    ForcePlotData data;
    data.base = result.base_value;
    data.final_margin = result.base_value;
    for (std::size_t j = 0; j < result.d; ++j) {
        double v = result.phi(row, j);
        data.final_margin += v;
        data.contributions.push_back({j, v, v >= 0.0});
    }
    std::stable_sort(data.contributions.begin(), data.contributions.end(),
                     [](const ForceContribution& a, const ForceContribution& b) {
                         return std::abs(a.value) > std::abs(b.value);
                     });
    return data;
}

}  // namespace churn
