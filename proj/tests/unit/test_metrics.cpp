#include <esnlab/errors.hpp>
#include <esnlab/metrics.hpp>
#include <esnlab/random.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace esnlab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Trapezoidal ROC area from a threshold sweep, ties handled as one threshold step.
double trapezoid_auc(std::vector<double> scores, std::vector<bool> positive) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
    const double p = static_cast<double>(std::count(positive.begin(), positive.end(), true));
    const double n = static_cast<double>(positive.size()) - p;
    double tp = 0, fp = 0, prev_tpr = 0, prev_fpr = 0, area = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            positive[order[j]] ? ++tp : ++fp;
            ++j;
        }
        const double tpr = tp / p;
        const double fpr = fp / n;
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
        i = j;
    }
    return area;
}

ConfusionMatrix cm_of(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    ConfusionMatrix cm;
    const auto n = static_cast<Eigen::Index>(rows.size());
    cm.counts.resize(n, n);
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (auto v : row) cm.counts(r, c++) = v;
        ++r;
    }
    return cm;
}

}  // namespace

TEST(Rmse, Examples) {
    const MatrixXd a{{0.3, 0.4}};
    EXPECT_EQ(rmse(a, a), 0.0);
    EXPECT_EQ(rmse(MatrixXd{{0, 0}}, MatrixXd{{1, 1}}), 1.0);
    EXPECT_NEAR(rmse(MatrixXd{{0, 0}}, MatrixXd{{1, 2}}), std::sqrt(2.5), 1e-15);
    EXPECT_NEAR(rmse(MatrixXd{{0, 0}}, MatrixXd{{1, 2}}), 1.58113, 1e-5);
}

TEST(Rmse, PoolsOutputsUniformly) {
    EXPECT_NEAR(rmse(MatrixXd{{0}, {0}}, MatrixXd{{3}, {4}}), std::sqrt(12.5), 1e-15);
}

TEST(Rmse, Errors) {
    EXPECT_THROW(rmse(MatrixXd(1, 0), MatrixXd(1, 0)), EmptyInput);
    EXPECT_THROW(rmse(MatrixXd::Zero(1, 2), MatrixXd::Zero(1, 3)), DimensionMismatch);
    EXPECT_THROW(mae(MatrixXd(0, 0), MatrixXd(0, 0)), EmptyInput);
}

TEST(Mae, Examples) {
    EXPECT_EQ(mae(MatrixXd{{1, 2}}, MatrixXd{{1, 2}}), 0.0);
    EXPECT_EQ(mae(MatrixXd{{0, 0}}, MatrixXd{{1, 2}}), 1.5);
}

TEST(RegressionMetrics, SymmetryAndOrdering) {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        MatrixXd a(2, 20), b(2, 20);
        for (auto& v : a.reshaped()) v = uniform_pm1(rng);
        for (auto& v : b.reshaped()) v = uniform_pm1(rng);
        EXPECT_EQ(rmse(a, b), rmse(b, a));
        EXPECT_EQ(mae(a, b), mae(b, a));
        EXPECT_GE(rmse(a, b), mae(a, b));
        EXPECT_GT(rmse(a, b), 0.0);
    }
}

TEST(R2, Examples) {
    const MatrixXd actual{{1, 2, 3, 4}};
    EXPECT_EQ(r2(actual, actual), 1.0);
    EXPECT_NEAR(r2(MatrixXd::Constant(1, 4, 2.5), actual), 0.0, 1e-15);
    EXPECT_LT(r2(MatrixXd::Constant(1, 4, 100.0), actual), 0.0);
    EXPECT_THROW(r2(actual, MatrixXd::Constant(1, 4, 1.0)), ZeroVariance);
}

TEST(R2, AveragesOverOutputs) {
    const MatrixXd actual{{1, 2, 3, 4}, {1, 2, 3, 4}};
    MatrixXd pred = actual;
    pred.row(1).setConstant(2.5);
    EXPECT_NEAR(r2(pred, actual), 0.5, 1e-15);
}

TEST(Confusion, Examples) {
    const std::vector<int> truth = {0, 1, 2, 0, 1, 2};
    const ConfusionMatrix perfect = confusion(truth, truth, 3);
    EXPECT_TRUE(perfect.counts.isApprox(Eigen::Matrix<std::int64_t, 3, 3>::Identity() * 2));

    const std::vector<int> all_one(6, 1);
    const ConfusionMatrix col = confusion(truth, all_one, 3);
    EXPECT_EQ(col.counts.col(1).sum(), 6);
    EXPECT_EQ(col.counts.col(0).sum() + col.counts.col(2).sum(), 0);

    // hand tally
    const std::vector<int> t = {0, 0, 0, 1, 1, 2, 2, 2, 2};
    const std::vector<int> p = {0, 1, 0, 1, 2, 2, 0, 2, 1};
    const ConfusionMatrix cm = confusion(t, p, 3);
    const auto expected = cm_of({{2, 1, 0}, {0, 1, 1}, {1, 1, 2}});
    EXPECT_EQ(cm.counts, expected.counts);
    EXPECT_EQ(cm.total(), 9);
}

TEST(Confusion, Errors) {
    const std::vector<int> a = {0, 1};
    const std::vector<int> b = {0};
    EXPECT_THROW(confusion(a, b, 2), DimensionMismatch);
    const std::vector<int> c = {0, 3};
    EXPECT_THROW(confusion(a, c, 2), UnknownLabel);
}

TEST(F1Macro, Examples) {
    EXPECT_EQ(f1_macro(cm_of({{4, 0}, {0, 6}})), 1.0);
    EXPECT_EQ(f1_macro(cm_of({{0, 5}, {5, 0}})), 0.0);
    EXPECT_NEAR(f1_macro(cm_of({{3, 1}, {1, 3}})), 0.75, 1e-15);
}

TEST(F1Macro, ClassWithNoSupportContributesZero) {
    // class 2 is never true nor predicted: P + R = 0 so its F1 is 0
    EXPECT_NEAR(f1_macro(cm_of({{2, 0, 0}, {0, 2, 0}, {0, 0, 0}})), 2.0 / 3.0, 1e-15);
}

TEST(Accuracy, Examples) {
    EXPECT_EQ(accuracy(cm_of({{4, 0}, {0, 6}})), 1.0);
    EXPECT_EQ(accuracy(cm_of({{3, 1}, {1, 3}})), 0.75);
    ConfusionMatrix empty;
    EXPECT_THROW(accuracy(empty), EmptyInput);
    EXPECT_THROW(accuracy(cm_of({{0, 0}, {0, 0}})), EmptyInput);
}

TEST(Auc, BinaryExamples) {
    const std::vector<double> s = {0.9, 0.8, 0.7, 0.1};
    const std::unique_ptr<bool[]> sep(new bool[4]{true, true, false, false});
    EXPECT_EQ(auc_binary(s, {sep.get(), 4}), 1.0);

    const std::vector<double> same(4, 0.5);
    EXPECT_EQ(auc_binary(same, {sep.get(), 4}), 0.5);

    // one inverted pair out of four
    const std::vector<double> h = {0.9, 0.6, 0.7, 0.1};
    const std::unique_ptr<bool[]> hp(new bool[4]{true, true, false, false});
    EXPECT_EQ(auc_binary(h, {hp.get(), 4}), 0.75);
}

TEST(Auc, HandFourPointCase) {
    // positives {0.9, 0.7}, negatives {0.7, 0.1}: the tied pair counts half,
    // ROC points (0, 0.5) (0.5, 1) (1, 1) give area 0.875
    const std::vector<double> s = {0.9, 0.7, 0.7, 0.1};
    const std::unique_ptr<bool[]> pos(new bool[4]{true, true, false, false});
    EXPECT_EQ(auc_binary(s, {pos.get(), 4}), 0.875);
    EXPECT_EQ(trapezoid_auc(s, {true, true, false, false}), 0.875);
}

TEST(Auc, MatchesTrapezoidOracleOnRandomScores) {
    Rng rng(7);
    for (int i = 0; i < 30; ++i) {
        std::vector<double> s(40);
        std::vector<bool> p(40);
        for (int k = 0; k < 40; ++k) {
            s[k] = std::round(10.0 * uniform_pm1(rng)) / 10.0;  // plenty of ties
            p[k] = (k % 3) == 0;
        }
        const std::unique_ptr<bool[]> pb(new bool[40]);
        for (int k = 0; k < 40; ++k) pb[k] = p[k];
        EXPECT_NEAR(auc_binary(s, {pb.get(), 40}), trapezoid_auc(s, p), 1e-12);
    }
}

TEST(Auc, MonotoneTransformInvariance) {
    Rng rng(8);
    std::vector<double> s(30);
    const std::unique_ptr<bool[]> p(new bool[30]);
    for (int k = 0; k < 30; ++k) {
        s[k] = uniform_pm1(rng);
        p[k] = k % 2 == 0;
    }
    std::vector<double> t(30);
    std::transform(s.begin(), s.end(), t.begin(), [](double v) { return std::exp(3.0 * v) - 7.0; });
    EXPECT_EQ(auc_binary(s, {p.get(), 30}), auc_binary(t, {p.get(), 30}));
}

TEST(Auc, SingleClassThrows) {
    const std::vector<double> s = {0.1, 0.2};
    const std::unique_ptr<bool[]> p(new bool[2]{true, true});
    EXPECT_THROW(auc_binary(s, {p.get(), 2}), SingleClassOnly);
}

TEST(AucMacro, PerfectAndSkippedClasses) {
    std::vector<VectorXd> scores = {VectorXd{{0.9, 0.1, 0.0}}, VectorXd{{0.2, 0.8, 0.0}},
                                    VectorXd{{0.7, 0.3, 0.0}}, VectorXd{{0.1, 0.9, 0.0}}};
    const std::vector<int> labels = {0, 1, 0, 1};
    EXPECT_EQ(auc_macro(scores, labels), 1.0);  // class 2 has no positives and is skipped
    const std::vector<int> one = {0, 0, 0, 0};
    // class 0 all positive, classes 1 and 2 all negative
    EXPECT_THROW(auc_macro(scores, one), SingleClassOnly);
}

TEST(ClassificationMetrics, PermutationInvariance) {
    const std::vector<int> t = {0, 0, 1, 1, 2, 2, 2, 1};
    const std::vector<int> p = {0, 1, 1, 2, 2, 0, 2, 1};
    const std::array<int, 3> perm = {2, 0, 1};
    std::vector<int> tp(t.size()), pp(p.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        tp[i] = perm[t[i]];
        pp[i] = perm[p[i]];
    }
    EXPECT_NEAR(f1_macro(confusion(t, p, 3)), f1_macro(confusion(tp, pp, 3)), 1e-15);

    Rng rng(3);
    std::vector<VectorXd> scores;
    std::vector<VectorXd> permuted;
    for (std::size_t i = 0; i < t.size(); ++i) {
        VectorXd v(3);
        for (auto& e : v) e = uniform_pm1(rng);
        VectorXd w(3);
        for (int c = 0; c < 3; ++c) w[perm[c]] = v[c];
        scores.push_back(v);
        permuted.push_back(w);
    }
    EXPECT_NEAR(auc_macro(scores, t), auc_macro(permuted, tp), 1e-15);
}

TEST(ClassificationMetrics, AccuracyIsTraceOverTotal) {
    const auto cm = cm_of({{5, 2, 1}, {0, 7, 3}, {4, 0, 9}});
    EXPECT_EQ(accuracy(cm), 21.0 / 31.0);
}
