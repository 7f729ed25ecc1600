#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace churn {

// Class 1 (churn) is the positive class.
struct ConfusionMatrix {
    std::size_t tn = 0, fp = 0, fn = 0, tp = 0;

    std::size_t total() const { return tn + fp + fn + tp; }
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct ClassificationReport {
    ClassMetrics per_class[2];  // index = class label
    double accuracy = 0.0;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    std::size_t total = 0;
    bool zero_denominator = false;  // some precision/recall fell back to 0
};

struct CurvePoints {
    std::vector<double> x, y, threshold;  // threshold is NaN for anchor points
    double auc = 0.0;
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);

ClassificationReport classification_report(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred);

// Rebuilds a report (f1, accuracy, macro and weighted averages) from
// given per-class precision/recall/support, e.g. to audit a published
// table at its own precision.
ClassificationReport aggregate_report(const ClassMetrics& class0, const ClassMetrics& class1);

// FPR/TPR points swept over distinct scores descending, with (0,0) and
// (1,1) appended; AUC by trapezoid. Tied scores collapse into one step.
CurvePoints roc_curve(const std::vector<int>& y_true, const std::vector<double>& scores);

// (recall, precision) points; the first point anchors recall 0 at the
// precision of the top-scored block.
CurvePoints pr_curve(const std::vector<int>& y_true, const std::vector<double>& scores);

// Independent AUC route: (concordant + ties/2) / (P*N) over all
// positive-negative pairs.
double auc_by_concordance(const std::vector<int>& y_true, const std::vector<double>& scores);

}  // namespace churn
