#include "esnlab/hpo.hpp"

#include "esnlab/errors.hpp"
#include "esnlab/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace esnlab {

SearchSpace SearchSpace::for_benchmark(BenchmarkKind kind) {
    SearchSpace space;
    if (!protocol(kind).needs_feedback) {
        space.feedback_density = {0.0, 0.0, false, false, false, 0.0};
        space.feedback_scale = {0.0, 0.0, false, false, false, 0.0};
    }
    return space;
}

void validate(const SearchSpace& space) {
    for (const Prior* p : {&space.spectral_radius, &space.leak_rate, &space.reservoir_density,
                           &space.input_density, &space.feedback_density, &space.input_scale,
                           &space.feedback_scale, &space.ridge_beta}) {
        if (!p->active) continue;
        if (!(p->lower <= p->upper)) throw InvalidConfig("prior has lower > upper");
        if (p->lower_open && p->lower == p->upper) throw InvalidConfig("prior interval is empty");
        if (p->log_scale && !(p->lower > 0.0)) throw InvalidConfig("log prior needs positive bounds");
    }
}

namespace {

double draw(const Prior& p, Rng& rng) {
    if (!p.active) return p.fixed;
    if (p.lower == p.upper) return p.lower;
    // u in [0, 1); an open lower bound maps it onto (lower, upper]
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double w = p.lower_open ? 1.0 - u : u;
    if (p.log_scale) {
        const double lo = std::log(p.lower);
        const double hi = std::log(p.upper);
        return std::clamp(std::exp(lo + w * (hi - lo)), p.lower, p.upper);
    }
    return p.lower + w * (p.upper - p.lower);
}

}  // namespace

TunedParams RandomSampler::sample(const SearchSpace& space, std::uint64_t study_seed,
                                  int trial_index, std::span<const TrialRecord>) const {
    validate(space);
    const std::uint64_t trial_seed = derive_seed(study_seed, static_cast<std::uint64_t>(trial_index));
    // one child stream per parameter so the draws are independent of each other
    auto next = [&, i = std::uint64_t{0}](const Prior& p) mutable {
        Rng rng(derive_seed(trial_seed, i++));
        return draw(p, rng);
    };
    TunedParams t;
    t.spectral_radius = next(space.spectral_radius);
    t.leak_rate = next(space.leak_rate);
    t.reservoir_density = next(space.reservoir_density);
    t.input_density = next(space.input_density);
    t.feedback_density = next(space.feedback_density);
    t.input_scale = next(space.input_scale);
    t.feedback_scale = next(space.feedback_scale);
    t.ridge_beta = next(space.ridge_beta);
    return t;
}

TunedParams sample_trial(const SearchSpace& space, std::uint64_t study_seed, int trial_index) {
    return RandomSampler{}.sample(space, study_seed, trial_index, {});
}

ConfigEvaluation best_of(ScoreKind kind, std::vector<double> per_seed_scores,
                         const std::vector<bool>& failed) {
    ConfigEvaluation eval;
    bool any = false;
    for (std::size_t i = 0; i < per_seed_scores.size(); ++i) {
        if (failed[i]) continue;
        if (!any || better(kind, per_seed_scores[i], eval.best_score)) eval.best_score = per_seed_scores[i];
        any = true;
    }
    if (!any) throw AllSeedsFailed("every instantiation failed");
    eval.per_seed_scores = std::move(per_seed_scores);
    return eval;
}

ConfigEvaluation evaluate_config(const TunedParams& params, const EsnConfig& base,
                                 const Task& task, int n_seeds, std::uint64_t study_seed,
                                 int trial_index) {
    if (n_seeds < 1) throw InvalidConfig("n_seeds must be >= 1");
    const EsnConfig config = apply_params(base, params);
    std::vector<double> scores;
    std::vector<bool> failed;
    for (int s = 0; s < n_seeds; ++s) {
        const RunOutcome run =
            run_once(config, params.ridge_beta, task, instantiation_seed(study_seed, trial_index, s));
        scores.push_back(run.failed ? failure_sentinel(task.score_kind()) : run.score);
        failed.push_back(run.failed);
    }
    return best_of(task.score_kind(), std::move(scores), failed);
}

StudyRecord run_study(const SearchSpace& space, const Objective& objective,
                      const StudyOptions& options, const Sampler& sampler) {
    if (options.n_trials < 1) throw InvalidConfig("n_trials must be >= 1");
    validate(space);

    StudyRecord record;
    record.study_seed = options.study_seed;
    record.score_kind = options.score_kind;
    record.trials.resize(static_cast<std::size_t>(options.n_trials));

    auto run_trial = [&](int index, std::span<const TrialRecord> history) {
        TrialRecord& trial = record.trials[static_cast<std::size_t>(index)];
        trial.trial_index = index;
        trial.params = sampler.sample(space, options.study_seed, index, history);
        try {
            ConfigEvaluation eval = objective(trial.params, index);
            trial.best_score = eval.best_score;
            trial.per_seed_scores = std::move(eval.per_seed_scores);
        } catch (const Error&) {
            trial.failed = true;
            trial.best_score = failure_sentinel(options.score_kind);
        }
    };

    int threads = options.threads > 0 ? options.threads
                                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, options.n_trials);
    if (!sampler.history_independent() || threads <= 1) {
        for (int i = 0; i < options.n_trials; ++i)
            run_trial(i, std::span<const TrialRecord>(record.trials.data(), static_cast<std::size_t>(i)));
    } else {
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::jthread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (int i = next++; i < options.n_trials; i = next++) {
                    try {
                        run_trial(i, {});
                    } catch (...) {
                        const std::lock_guard lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                }
            });
        }
        pool.clear();
        if (first_error) std::rethrow_exception(first_error);
    }

    record.best_trial_index = 0;
    for (const TrialRecord& t : record.trials) {
        const TrialRecord& best = record.trials[static_cast<std::size_t>(record.best_trial_index)];
        if (better(options.score_kind, t.best_score, best.best_score)) record.best_trial_index = t.trial_index;
    }
    return record;
}

StudyRecord run_study(const SearchSpace& space, const ModelSpec& spec, const Task& task,
                      int n_reservoir, const StudyOptions& options, int n_seeds) {
    const EsnConfig base = make_config(spec, task.protocol, n_reservoir);
    StudyOptions opts = options;
    opts.score_kind = task.score_kind();
    const Objective objective = [&](const TunedParams& params, int trial_index) {
        return evaluate_config(params, base, task, n_seeds, options.study_seed, trial_index);
    };
    StudyRecord record = run_study(space, objective, opts);
    record.benchmark = std::string(to_string(task.protocol.kind));
    record.model_label = spec.label();
    record.n_reservoir = n_reservoir;
    record.study_label = "study_" + record.model_label + "_" + record.benchmark;
    return record;
}

}  // namespace esnlab
