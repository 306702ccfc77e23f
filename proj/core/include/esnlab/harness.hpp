#pragma once

#include "esnlab/experiment.hpp"
#include "esnlab/hpo.hpp"
#include "esnlab/models.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace esnlab {

/// Mean after dropping values outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR].
/// Quartiles invert the empirical CDF (smallest x with F(x) >= p), so the
/// result does not change when the data set is duplicated.
/// Throws TooFewValues for fewer than 3 values.
double trimmed_mean(std::span<const double> values);

/// Per-seed results at one reservoir size. A NaN score marks a failed seed;
/// failed seeds are left out of the trimmed aggregates.
struct SweepRow {
    int n_reservoir = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> scores;
    std::vector<double> train_ms;
    std::vector<double> predict_ms;
    double trimmed_score = 0.0;
    double trimmed_train_ms = 0.0;
    double trimmed_predict_ms = 0.0;

    int failed_count() const;
};

struct SweepRecord {
    std::string model_label;
    std::string benchmark;
    ScoreKind score_kind = ScoreKind::rmse;
    std::vector<SweepRow> rows;
};

/// Field-by-field equality comparing doubles by bit pattern (NaN == NaN).
bool identical(const SweepRecord& a, const SweepRecord& b);

/// Recomputes the trimmed aggregates of a row from its per-seed vectors.
/// With fewer than 3 successful seeds the plain mean is used; with none the
/// aggregates are NaN.
void aggregate(SweepRow& row);

struct SweepOptions {
    int n_seeds = 15;
    /// Runs one discarded instantiation before the timed ones.
    bool warm_up = true;
};

/// For every size: build, train and evaluate with root seeds 0..n_seeds-1,
/// recording per-seed score and train/predict wall-clock times.
/// Sizes must be non-empty and strictly increasing.
SweepRecord size_sweep(const ModelSpec& spec, const TunedParams& params, const Task& task,
                       std::span<const int> sizes, const SweepOptions& options = {});

enum class Phase { train, predict };

struct ComplexityFit {
    Phase phase = Phase::train;
    double exponent = 0.0;   // c in time ~ N^c
    double intercept = 0.0;  // log-space intercept
    double residual = 0.0;   // RMS residual of the log-log fit
    std::vector<int> sizes;

    bool operator==(const ComplexityFit&) const = default;
};

/// Least-squares slope of log(time) against log(N). Needs at least 4 points.
/// Throws NonPositiveTime for any time <= 0.
ComplexityFit fit_complexity(std::span<const int> sizes, std::span<const double> times,
                             Phase phase = Phase::train);

/// Fits both phases to the trimmed mean times of a sweep.
std::pair<ComplexityFit, ComplexityFit> fit_sweep_complexity(const SweepRecord& sweep);

}  // namespace esnlab
