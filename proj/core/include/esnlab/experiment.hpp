#pragma once

#include "esnlab/benchmarks.hpp"
#include "esnlab/config.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace esnlab {

enum class ScoreKind { rmse, f1 };

std::string_view to_string(ScoreKind kind);
ScoreKind parse_score_kind(std::string_view s);

constexpr bool lower_is_better(ScoreKind kind) { return kind == ScoreKind::rmse; }

/// Score recorded for a failed run: +inf for RMSE, 0 for F1.
constexpr double failure_sentinel(ScoreKind kind) {
    return kind == ScoreKind::rmse ? std::numeric_limits<double>::infinity() : 0.0;
}

/// True when `a` is a strictly better score than `b`.
constexpr bool better(ScoreKind kind, double a, double b) {
    return lower_is_better(kind) ? a < b : a > b;
}

/// The hyperparameters a study tunes; everything else is fixed by the model spec.
struct TunedParams {
    double spectral_radius = 0.8;
    double leak_rate = 0.5;
    double reservoir_density = 0.15;
    double input_density = 0.95;
    double feedback_density = 0.0;
    double input_scale = 1.0;
    double feedback_scale = 0.0;
    double ridge_beta = 1e-6;

    bool operator==(const TunedParams&) const = default;
};

/// Copies the tuned fields of `config` (ridge_beta is not part of EsnConfig).
TunedParams tuned_params_of(const EsnConfig& config, double ridge_beta);

/// Overwrites the tuned fields of `config`.
EsnConfig apply_params(EsnConfig config, const TunedParams& params);

/// Prepared data for one benchmark run.
struct Task {
    BenchmarkProtocol protocol;
    SequenceDataset sequence;       // regression benchmarks
    GroupedDataset train_groups;    // digits
    GroupedDataset test_groups;     // digits

    ScoreKind score_kind() const {
        return protocol.kind == BenchmarkKind::digits ? ScoreKind::f1 : ScoreKind::rmse;
    }
};

/// Size of the synthetic digit surrogate used when no feature file is given.
struct SyntheticDigitsOptions {
    int groups_per_class = 60;
    int samples_per_group = 20;
    double class_separation = 1.0;
};

/// Generates the benchmark's data under its default protocol. `data_seed`
/// seeds NARMA-10 inputs and the synthetic digit set and split.
Task make_task(BenchmarkKind kind, std::uint64_t data_seed = 0,
               const SyntheticDigitsOptions& digits = {});

/// Digit task from an already loaded dataset, split by whole groups.
Task make_digits_task(const GroupedDataset& all, std::uint64_t split_seed, double train_frac = 0.6,
                      double test_frac = 0.2);

/// Outcome of one build/train/evaluate run.
struct RunOutcome {
    bool failed = false;
    std::string error;
    double score = 0.0;  // rmse or macro-F1 per the task's score kind
    double mae = 0.0;    // regression only
    double accuracy = 0.0;  // classification only
    double auc = 0.0;       // classification only
    double train_ms = 0.0;   // build + fit
    double predict_ms = 0.0;  // test-split prediction
};

/// Builds with `root_seed`, trains on the train split and scores the test split:
///   narma10       zero state, driven by the test inputs; the model's own
///                 outputs fill any output term; RMSE after the test washout
///   figure8       continues from the training state in free run with the
///                 prediction noise; RMSE after the test washout
///   mackey-glass  continues from the training state in free run; RMSE
///   digits        averaged-state classifier; macro-F1
/// Library errors and non-finite scores are reported as a failed outcome.
RunOutcome run_once(const EsnConfig& config, double ridge_beta, const Task& task,
                    std::uint64_t root_seed);

}  // namespace esnlab
