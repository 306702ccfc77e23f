#pragma once

#include "esnlab/experiment.hpp"
#include "esnlab/models.hpp"
#include "esnlab/random.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace esnlab {

/// Prior over one tuned parameter. Inactive priors always yield `fixed`.
struct Prior {
    double lower = 0.0;
    double upper = 1.0;
    bool log_scale = false;
    bool lower_open = false;  // sample from (lower, upper] instead of [lower, upper]
    bool active = true;
    double fixed = 0.0;

    bool operator==(const Prior&) const = default;
};

struct SearchSpace {
    Prior spectral_radius{0.01, 1.25, false, true};
    Prior leak_rate{0.01, 1.0, false, true};
    Prior reservoir_density{0.05, 1.0};
    Prior input_density{0.05, 1.0};
    Prior feedback_density{0.05, 1.0};
    Prior input_scale{1e-3, 10.0, true};
    Prior feedback_scale{1e-3, 10.0, true};
    Prior ridge_beta{1e-9, 1.0, true};

    /// Default space; feedback priors are inactive (fixed at 0) unless the
    /// benchmark needs feedback.
    static SearchSpace for_benchmark(BenchmarkKind kind);

    bool operator==(const SearchSpace&) const = default;
};

/// Throws InvalidConfig when an active prior has lower > upper, a log prior
/// has a non-positive bound, or an open lower bound equals the upper bound.
void validate(const SearchSpace& space);

struct TrialRecord {
    int trial_index = 0;
    TunedParams params;
    std::vector<double> per_seed_scores;
    double best_score = 0.0;
    bool failed = false;

    bool operator==(const TrialRecord&) const = default;
};

struct StudyRecord {
    std::string study_label;
    std::string benchmark;
    std::string model_label;
    int n_reservoir = 0;
    ScoreKind score_kind = ScoreKind::rmse;
    std::uint64_t study_seed = 0;
    std::vector<TrialRecord> trials;
    int best_trial_index = 0;

    const TrialRecord& best_trial() const { return trials.at(static_cast<std::size_t>(best_trial_index)); }
    bool operator==(const StudyRecord&) const = default;
};

/// Proposes parameters for one trial.
class Sampler {
public:
    virtual ~Sampler() = default;
    /// `history` holds the already finished trials in index order.
    virtual TunedParams sample(const SearchSpace& space, std::uint64_t study_seed, int trial_index,
                               std::span<const TrialRecord> history) const = 0;
    /// True when proposals ignore `history`, so trials may run in any order.
    virtual bool history_independent() const = 0;
};

/// Independent draws seeded by (study_seed, trial_index). Log-scale priors are
/// sampled uniformly in log space.
class RandomSampler final : public Sampler {
public:
    TunedParams sample(const SearchSpace& space, std::uint64_t study_seed, int trial_index,
                       std::span<const TrialRecord> history) const override;
    bool history_independent() const override { return true; }
};

/// sample_trial with the default random sampler.
TunedParams sample_trial(const SearchSpace& space, std::uint64_t study_seed, int trial_index);

/// Root seed of one instantiation within a study.
constexpr std::uint64_t instantiation_seed(std::uint64_t study_seed, int trial_index, int seed_index) {
    return derive_seed(study_seed, {0x5eedULL, static_cast<std::uint64_t>(trial_index),
                                    static_cast<std::uint64_t>(seed_index)});
}

struct ConfigEvaluation {
    double best_score = 0.0;
    std::vector<double> per_seed_scores;
};

/// Picks the best score (min RMSE or max F1) among per-seed scores that may
/// contain failure sentinels. Throws AllSeedsFailed when every entry failed.
ConfigEvaluation best_of(ScoreKind kind, std::vector<double> per_seed_scores,
                         const std::vector<bool>& failed);

/// Instantiates `base` with `params` n_seeds times (seeds from
/// instantiation_seed) and keeps the best score.
/// Throws AllSeedsFailed when every instantiation failed.
ConfigEvaluation evaluate_config(const TunedParams& params, const EsnConfig& base,
                                 const Task& task, int n_seeds, std::uint64_t study_seed,
                                 int trial_index);

/// Scores one trial; should throw AllSeedsFailed for a total failure.
using Objective = std::function<ConfigEvaluation(const TunedParams& params, int trial_index)>;

struct StudyOptions {
    int n_trials = 150;
    std::uint64_t study_seed = 0;
    ScoreKind score_kind = ScoreKind::rmse;
    /// Worker threads for history-independent samplers; 0 picks the hardware count.
    int threads = 0;
};

/// Runs trials 0..n_trials-1; failures are recorded with the sentinel score.
/// The record depends only on the inputs, never on scheduling.
StudyRecord run_study(const SearchSpace& space, const Objective& objective,
                      const StudyOptions& options, const Sampler& sampler = RandomSampler{});

/// The benchmark study: model spec at n_reservoir neurons, n_seeds
/// instantiations per trial.
StudyRecord run_study(const SearchSpace& space, const ModelSpec& spec, const Task& task,
                      int n_reservoir, const StudyOptions& options, int n_seeds = 10);

}  // namespace esnlab
