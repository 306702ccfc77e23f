#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace esnlab {

/// Raw (unnormalized) root mean square error pooled over every element.
double rmse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual);

/// Mean absolute error pooled over every element.
double mae(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual);

/// Coefficient of determination. Rows are output dimensions and columns are
/// samples; the per-row scores are averaged uniformly. Throws ZeroVariance
/// when any row of `actual` is constant.
double r2(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual);

/// Rows are true classes, columns are predicted classes.
struct ConfusionMatrix {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;

    std::int64_t total() const { return counts.sum(); }
    int n_classes() const { return static_cast<int>(counts.rows()); }
};

ConfusionMatrix confusion(std::span<const int> true_labels, std::span<const int> predicted_labels,
                          int n_classes);

/// Unweighted mean over classes of 2PR/(P+R), a class contributing 0 when P+R = 0.
double f1_macro(const ConfusionMatrix& cm);

/// trace / total. Throws EmptyInput for an empty matrix.
double accuracy(const ConfusionMatrix& cm);

/// One-vs-rest ROC area for a single binary problem with ties counted half.
/// Throws SingleClassOnly when there are no positives or no negatives.
double auc_binary(std::span<const double> scores, std::span<const bool> positive);

/// Mean one-vs-rest AUC over the classes that have both positives and
/// negatives. `scores` holds one length-L score vector per group.
double auc_macro(const std::vector<Eigen::VectorXd>& scores, std::span<const int> true_labels);

}  // namespace esnlab
