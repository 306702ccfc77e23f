#include "esnlab/harness.hpp"

#include "esnlab/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace esnlab {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

// Smallest order statistic whose empirical CDF reaches p.
double ecdf_quantile(const std::vector<double>& sorted, double p) {
    const auto n = static_cast<double>(sorted.size());
    const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(n * p - 1e-12)));
    return sorted[std::min(rank, sorted.size()) - 1];
}

double trimmed_or_nan(const std::vector<double>& values) {
    if (values.empty()) return nan_value;
    if (values.size() < 3) return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return trimmed_mean(values);
}

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(),
                                              [](double x, double y) { return same_bits(x, y); });
}

}  // namespace

double trimmed_mean(std::span<const double> values) {
    if (values.size() < 3) throw TooFewValues("trimmed_mean needs at least 3 values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double q1 = ecdf_quantile(sorted, 0.25);
    const double q3 = ecdf_quantile(sorted, 0.75);
    const double iqr = q3 - q1;
    const double lo = q1 - 1.5 * iqr;
    const double hi = q3 + 1.5 * iqr;
    double sum = 0.0;
    std::size_t kept = 0;
    for (double v : sorted) {
        if (v < lo || v > hi) continue;
        sum += v;
        ++kept;
    }
    return sum / static_cast<double>(kept);
}

int SweepRow::failed_count() const {
    return static_cast<int>(std::count_if(scores.begin(), scores.end(),
                                          [](double s) { return std::isnan(s); }));
}

void aggregate(SweepRow& row) {
    std::vector<double> scores;
    std::vector<double> train;
    std::vector<double> predict;
    for (std::size_t i = 0; i < row.scores.size(); ++i) {
        if (std::isnan(row.scores[i])) continue;
        scores.push_back(row.scores[i]);
        train.push_back(row.train_ms[i]);
        predict.push_back(row.predict_ms[i]);
    }
    row.trimmed_score = trimmed_or_nan(scores);
    row.trimmed_train_ms = trimmed_or_nan(train);
    row.trimmed_predict_ms = trimmed_or_nan(predict);
}

bool identical(const SweepRecord& a, const SweepRecord& b) {
    if (a.model_label != b.model_label || a.benchmark != b.benchmark ||
        a.score_kind != b.score_kind || a.rows.size() != b.rows.size())
        return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const SweepRow& x = a.rows[i];
        const SweepRow& y = b.rows[i];
        if (x.n_reservoir != y.n_reservoir || x.seeds != y.seeds || !same_bits(x.scores, y.scores) ||
            !same_bits(x.train_ms, y.train_ms) || !same_bits(x.predict_ms, y.predict_ms) ||
            !same_bits(x.trimmed_score, y.trimmed_score) ||
            !same_bits(x.trimmed_train_ms, y.trimmed_train_ms) ||
            !same_bits(x.trimmed_predict_ms, y.trimmed_predict_ms))
            return false;
    }
    return true;
}

SweepRecord size_sweep(const ModelSpec& spec, const TunedParams& params, const Task& task,
                       std::span<const int> sizes, const SweepOptions& options) {
    if (sizes.empty()) throw InvalidConfig("size_sweep: no sizes given");
    if (sizes.front() < 1 ||
        std::adjacent_find(sizes.begin(), sizes.end(), std::greater_equal<>{}) != sizes.end())
        throw InvalidConfig("size_sweep: sizes must be strictly increasing");
    if (options.n_seeds < 1) throw InvalidConfig("size_sweep: n_seeds must be >= 1");

    SweepRecord record;
    record.model_label = spec.label();
    record.benchmark = std::string(to_string(task.protocol.kind));
    record.score_kind = task.score_kind();

    if (options.warm_up) {
        const EsnConfig config = apply_params(make_config(spec, task.protocol, sizes.front()), params);
        (void)run_once(config, params.ridge_beta, task, 0);
    }

    for (int n : sizes) {
        const EsnConfig config = apply_params(make_config(spec, task.protocol, n), params);
        SweepRow row;
        row.n_reservoir = n;
        for (int s = 0; s < options.n_seeds; ++s) {
            const auto seed = static_cast<std::uint64_t>(s);
            const RunOutcome run = run_once(config, params.ridge_beta, task, seed);
            row.seeds.push_back(seed);
            row.scores.push_back(run.failed ? nan_value : run.score);
            row.train_ms.push_back(run.train_ms);
            row.predict_ms.push_back(run.predict_ms);
        }
        aggregate(row);
        record.rows.push_back(std::move(row));
    }
    return record;
}

ComplexityFit fit_complexity(std::span<const int> sizes, std::span<const double> times, Phase phase) {
    if (sizes.size() != times.size()) throw DimensionMismatch("fit_complexity: length mismatch");
    if (sizes.size() < 4) throw TooFewValues("fit_complexity needs at least 4 sizes");
    const auto n = static_cast<double>(sizes.size());
    double sx = 0.0;
    double sy = 0.0;
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (!(times[i] > 0.0)) throw NonPositiveTime("fit_complexity: times must be positive");
        if (sizes[i] < 1) throw InvalidConfig("fit_complexity: sizes must be positive");
        lx.push_back(std::log(static_cast<double>(sizes[i])));
        ly.push_back(std::log(times[i]));
        sx += lx.back();
        sy += ly.back();
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw InvalidConfig("fit_complexity: sizes must not all be equal");

    ComplexityFit fit;
    fit.phase = phase;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.exponent * lx[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.sizes.assign(sizes.begin(), sizes.end());
    return fit;
}

std::pair<ComplexityFit, ComplexityFit> fit_sweep_complexity(const SweepRecord& sweep) {
    std::vector<int> sizes;
    std::vector<double> train;
    std::vector<double> predict;
    for (const SweepRow& row : sweep.rows) {
        sizes.push_back(row.n_reservoir);
        train.push_back(row.trimmed_train_ms);
        predict.push_back(row.trimmed_predict_ms);
    }
    return {fit_complexity(sizes, train, Phase::train), fit_complexity(sizes, predict, Phase::predict)};
}

}  // namespace esnlab
