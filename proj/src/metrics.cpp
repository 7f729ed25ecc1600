#include "churn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "churn/errors.hpp"

namespace churn {

namespace {

void check_binary_pairs(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw DataError("metrics: length mismatch");
    if (y_true.empty()) throw DataError("metrics: empty input");
    for (int v : y_true)
        if (v != 0 && v != 1) throw DataError("metrics: non-binary true label");
    for (int v : y_pred)
        if (v != 0 && v != 1) throw DataError("metrics: non-binary predicted label");
}

double safe_ratio(double num, double denom, bool& fell_back) {
    if (denom == 0.0) {
        fell_back = true;
        return 0.0;
    }
    return num / denom;
}

// Rows sorted by score descending, ties grouped.
struct SweepPoint {
    double threshold;
    std::size_t tp, fp;
};

std::vector<SweepPoint> sweep(const std::vector<int>& y_true, const std::vector<double>& scores) {
    std::vector<std::size_t> order(y_true.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<SweepPoint> points;
    std::size_t tp = 0, fp = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (y_true[order[k]] == 1)
            ++tp;
        else
            ++fp;
        bool block_end = (k + 1 == order.size()) || scores[order[k + 1]] != scores[order[k]];
        if (block_end) points.push_back({scores[order[k]], tp, fp});
    }
    return points;
}

}  // namespace

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    check_binary_pairs(y_true, y_pred);
    ConfusionMatrix m;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1)
            (y_pred[i] == 1 ? m.tp : m.fn) += 1;
        else
            (y_pred[i] == 1 ? m.fp : m.tn) += 1;
    }
    return m;
}

ClassificationReport aggregate_report(const ClassMetrics& class0, const ClassMetrics& class1) {
    ClassificationReport r;
    r.per_class[0] = class0;
    r.per_class[1] = class1;
    for (ClassMetrics& c : r.per_class) {
        double pr = c.precision + c.recall;
        c.f1 = pr > 0.0 ? 2.0 * c.precision * c.recall / pr : 0.0;
    }
    r.total = class0.support + class1.support;
    double w0 = static_cast<double>(class0.support) / static_cast<double>(r.total);
    double w1 = static_cast<double>(class1.support) / static_cast<double>(r.total);

    r.macro_precision = 0.5 * (r.per_class[0].precision + r.per_class[1].precision);
    r.macro_recall = 0.5 * (r.per_class[0].recall + r.per_class[1].recall);
    r.macro_f1 = 0.5 * (r.per_class[0].f1 + r.per_class[1].f1);
    r.weighted_precision = w0 * r.per_class[0].precision + w1 * r.per_class[1].precision;
    r.weighted_recall = w0 * r.per_class[0].recall + w1 * r.per_class[1].recall;
    r.weighted_f1 = w0 * r.per_class[0].f1 + w1 * r.per_class[1].f1;
    return r;
}

ClassificationReport classification_report(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred) {
    ConfusionMatrix m = confusion(y_true, y_pred);
    bool fell_back = false;

    ClassMetrics c0, c1;
    // Class 0 treats label 0 as "positive".
    c0.precision = safe_ratio(static_cast<double>(m.tn), static_cast<double>(m.tn + m.fn),
                              fell_back);
    c0.recall = safe_ratio(static_cast<double>(m.tn), static_cast<double>(m.tn + m.fp),
                           fell_back);
    c0.support = m.tn + m.fp;
    c1.precision = safe_ratio(static_cast<double>(m.tp), static_cast<double>(m.tp + m.fp),
                              fell_back);
    c1.recall = safe_ratio(static_cast<double>(m.tp), static_cast<double>(m.tp + m.fn),
                           fell_back);
    c1.support = m.tp + m.fn;

    ClassificationReport r = aggregate_report(c0, c1);
    r.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
    r.zero_denominator = fell_back;
    return r;
}

CurvePoints roc_curve(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size()) throw DataError("roc_curve: length mismatch");
    std::size_t P = 0;
    for (int v : y_true) P += static_cast<std::size_t>(v);
    std::size_t N = y_true.size() - P;
    if (P == 0 || N == 0) throw DataError("roc_curve: need both classes (AUC undefined)");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    CurvePoints curve;
    curve.x.push_back(0.0);
    curve.y.push_back(0.0);
    curve.threshold.push_back(nan);
    for (const SweepPoint& pt : sweep(y_true, scores)) {
        curve.x.push_back(static_cast<double>(pt.fp) / static_cast<double>(N));
        curve.y.push_back(static_cast<double>(pt.tp) / static_cast<double>(P));
        curve.threshold.push_back(pt.threshold);
    }
    if (curve.x.back() != 1.0 || curve.y.back() != 1.0) {
        curve.x.push_back(1.0);
        curve.y.push_back(1.0);
        curve.threshold.push_back(nan);
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.x.size(); ++k)
        auc += 0.5 * (curve.x[k] - curve.x[k - 1]) * (curve.y[k] + curve.y[k - 1]);
    curve.auc = auc;
    return curve;
}

CurvePoints pr_curve(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size()) throw DataError("pr_curve: length mismatch");
    std::size_t P = 0;
    for (int v : y_true) P += static_cast<std::size_t>(v);
    if (P == 0) throw DataError("pr_curve: no positive labels");

    std::vector<SweepPoint> points = sweep(y_true, scores);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    CurvePoints curve;
    double top_precision = static_cast<double>(points.front().tp) /
                           static_cast<double>(points.front().tp + points.front().fp);
    curve.x.push_back(0.0);
    curve.y.push_back(top_precision);
    curve.threshold.push_back(nan);
    for (const SweepPoint& pt : points) {
        curve.x.push_back(static_cast<double>(pt.tp) / static_cast<double>(P));
        curve.y.push_back(static_cast<double>(pt.tp) / static_cast<double>(pt.tp + pt.fp));
        curve.threshold.push_back(pt.threshold);
    }
    return curve;
}

double auc_by_concordance(const std::vector<int>& y_true, const std::vector<double>& scores) {
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < y_true.size(); ++i)
        (y_true[i] == 1 ? pos : neg).push_back(scores[i]);
    if (pos.empty() || neg.empty())
        throw DataError("auc_by_concordance: need both classes");
    double sum = 0.0;
    for (double p : pos)
        for (double n : neg) {
            if (p > n)
                sum += 1.0;
            else if (p == n)
                sum += 0.5;
        }
    return sum / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

}  // namespace churn
