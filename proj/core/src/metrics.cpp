#include "esnlab/metrics.hpp"

#include "esnlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>

namespace esnlab {

namespace {

void check_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("metric inputs differ in shape");
    if (a.size() == 0) throw EmptyInput("metric inputs are empty");
}

}  // namespace

double rmse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual) {
    check_same_shape(predicted, actual);
    return std::sqrt((predicted - actual).squaredNorm() / static_cast<double>(actual.size()));
}

double mae(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual) {
    check_same_shape(predicted, actual);
    return (predicted - actual).cwiseAbs().sum() / static_cast<double>(actual.size());
}

double r2(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual) {
    check_same_shape(predicted, actual);
    double total = 0.0;
    for (Eigen::Index r = 0; r < actual.rows(); ++r) {
        const double mean = actual.row(r).mean();
        const double ss_tot = (actual.row(r).array() - mean).square().sum();
        if (!(ss_tot > 0.0)) throw ZeroVariance("r2: output " + std::to_string(r) + " is constant");
        const double ss_res = (actual.row(r) - predicted.row(r)).squaredNorm();
        total += 1.0 - ss_res / ss_tot;
    }
    return total / static_cast<double>(actual.rows());
}

ConfusionMatrix confusion(std::span<const int> true_labels, std::span<const int> predicted_labels,
                          int n_classes) {
    if (true_labels.size() != predicted_labels.size())
        throw DimensionMismatch("confusion: label vectors differ in length");
    ConfusionMatrix cm;
    cm.counts.setZero(n_classes, n_classes);
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        const int t = true_labels[i];
        const int p = predicted_labels[i];
        if (t < 0 || t >= n_classes || p < 0 || p >= n_classes)
            throw UnknownLabel("confusion: label outside [0, " + std::to_string(n_classes) + ")");
        ++cm.counts(t, p);
    }
    return cm;
}

double f1_macro(const ConfusionMatrix& cm) {
    if (cm.n_classes() == 0 || cm.total() == 0) throw EmptyInput("f1_macro: empty confusion matrix");
    double sum = 0.0;
    for (int c = 0; c < cm.n_classes(); ++c) {
        const auto tp = static_cast<double>(cm.counts(c, c));
        const auto predicted = static_cast<double>(cm.counts.col(c).sum());
        const auto actual = static_cast<double>(cm.counts.row(c).sum());
        const double precision = predicted > 0 ? tp / predicted : 0.0;
        const double recall = actual > 0 ? tp / actual : 0.0;
        if (precision + recall > 0.0) sum += 2.0 * precision * recall / (precision + recall);
    }
    return sum / cm.n_classes();
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.n_classes() == 0 || cm.total() == 0) throw EmptyInput("accuracy: empty confusion matrix");
    return static_cast<double>(cm.counts.trace()) / static_cast<double>(cm.total());
}

double auc_binary(std::span<const double> scores, std::span<const bool> positive) {
    if (scores.size() != positive.size())
        throw DimensionMismatch("auc: scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Mann-Whitney U with mid-ranks for ties.
    double positive_rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            if (positive[order[k]]) {
                positive_rank_sum += mid_rank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw SingleClassOnly("auc: need both positives and negatives");
    const double np = static_cast<double>(n_pos);
    const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

double auc_macro(const std::vector<Eigen::VectorXd>& scores, std::span<const int> true_labels) {
    if (scores.size() != true_labels.size())
        throw DimensionMismatch("auc_macro: one score vector per label required");
    if (scores.empty()) throw EmptyInput("auc_macro: no groups");
    const auto n_classes = scores.front().size();
    double sum = 0.0;
    int used = 0;
    std::vector<double> column(scores.size());
    const auto positive = std::make_unique<bool[]>(scores.size());
    for (Eigen::Index c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i].size() != n_classes)
                throw DimensionMismatch("auc_macro: score vectors differ in length");
            column[i] = scores[i][c];
            positive[i] = true_labels[i] == c;
        }
        const std::span<const bool> labels(positive.get(), scores.size());
        try {
            sum += auc_binary(column, labels);
            ++used;
        } catch (const SingleClassOnly&) {
        }
    }
    if (used == 0) throw SingleClassOnly("auc_macro: no class has both positives and negatives");
    return sum / used;
}

}  // namespace esnlab
