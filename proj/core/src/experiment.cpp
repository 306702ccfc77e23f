#include "esnlab/experiment.hpp"

#include "esnlab/errors.hpp"
#include "esnlab/metrics.hpp"
#include "esnlab/reservoir.hpp"
#include "esnlab/training.hpp"

#include <chrono>
#include <cmath>

namespace esnlab {

std::string_view to_string(ScoreKind kind) { return kind == ScoreKind::rmse ? "rmse" : "f1"; }

ScoreKind parse_score_kind(std::string_view s) {
    if (s == "rmse") return ScoreKind::rmse;
    if (s == "f1") return ScoreKind::f1;
    throw InvalidConfig("unknown score name '" + std::string(s) + "'");
}

TunedParams tuned_params_of(const EsnConfig& c, double ridge_beta) {
    return {c.spectral_radius, c.leak_rate,   c.reservoir_density, c.input_density,
            c.feedback_density, c.input_scale, c.feedback_scale,   ridge_beta};
}

EsnConfig apply_params(EsnConfig c, const TunedParams& p) {
    c.spectral_radius = p.spectral_radius;
    c.leak_rate = p.leak_rate;
    c.reservoir_density = p.reservoir_density;
    c.input_density = p.input_density;
    c.feedback_density = p.feedback_density;
    c.input_scale = p.input_scale;
    c.feedback_scale = p.feedback_scale;
    return c;
}

Task make_task(BenchmarkKind kind, std::uint64_t data_seed, const SyntheticDigitsOptions& digits) {
    Task task;
    task.protocol = protocol(kind);
    switch (kind) {
        case BenchmarkKind::narma10:
            task.sequence = gen_narma10(task.protocol.total_len, data_seed);
            break;
        case BenchmarkKind::figure8:
            task.sequence = gen_figure8(task.protocol.total_len);
            break;
        case BenchmarkKind::mackey_glass:
            task.sequence = gen_mackey_glass(task.protocol.total_len);
            break;
        case BenchmarkKind::digits: {
            const GroupedDataset all =
                gen_synthetic_digits(5, 85, digits.groups_per_class, digits.samples_per_group,
                                     digits.class_separation, data_seed);
            return make_digits_task(all, data_seed, task.protocol.train_fraction,
                                    task.protocol.test_fraction);
        }
    }
    return task;
}

Task make_digits_task(const GroupedDataset& all, std::uint64_t split_seed, double train_frac,
                      double test_frac) {
    Task task;
    task.protocol = protocol(BenchmarkKind::digits);
    task.protocol.n_inputs = all.n_channels;
    task.protocol.n_outputs = all.n_classes;
    task.protocol.train_fraction = train_frac;
    task.protocol.test_fraction = test_frac;
    auto [train, test] = split_grouped(all, train_frac, test_frac, split_seed);
    task.train_groups = std::move(train);
    task.test_groups = std::move(test);
    return task;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void score_regression(const EsnConfig& config, double beta, const Task& task,
                      std::uint64_t root_seed, RunOutcome& out) {
    const SequenceDataset& data = task.sequence;
    const BenchmarkKind kind = task.protocol.kind;

    auto start = Clock::now();
    const WeightSet weights = build(config, root_seed);
    Rng train_noise = stream_rng(root_seed, Stream::noise);
    TrainedModel model = train(weights, config, data, beta, train_noise);
    out.train_ms = elapsed_ms(start);

    const Matrix test_inputs = data.test_inputs();
    const Matrix test_targets = data.test_targets();
    const int horizon = data.test_len;
    Rng predict_noise = stream_rng(root_seed, Stream::prediction_noise);

    start = Clock::now();
    Matrix predicted;
    int skip = 0;
    if (kind == BenchmarkKind::narma10) {
        ReservoirState state = zero_state(config);
        const PredictMode mode =
            config.has_output_path() ? PredictMode::free_run : PredictMode::teacher_forced;
        predicted = predict(model, test_inputs, mode, horizon, task.protocol.predict_noise, state,
                            predict_noise, &test_targets);
        skip = data.washout_test;
    } else {
        ReservoirState state = model.final_state;
        predicted = predict(model, test_inputs, PredictMode::free_run, horizon,
                            task.protocol.predict_noise, state, predict_noise);
        skip = data.washout_test;
    }
    out.predict_ms = elapsed_ms(start);

    const Matrix p = predicted.rightCols(horizon - skip);
    const Matrix a = test_targets.rightCols(horizon - skip);
    out.score = rmse(p, a);
    out.mae = mae(p, a);
}

void score_classification(const EsnConfig& config, double beta, const Task& task,
                          std::uint64_t root_seed, RunOutcome& out) {
    auto start = Clock::now();
    const WeightSet weights = build(config, root_seed);
    const TrainedModel model = fit_classifier(weights, config, task.train_groups, 0, beta);
    out.train_ms = elapsed_ms(start);

    start = Clock::now();
    std::vector<int> truth;
    std::vector<int> predicted;
    std::vector<Vector> scores;
    for (const Group& g : task.test_groups.groups) {
        Classification c = classify(model, g);
        truth.push_back(g.label);
        predicted.push_back(c.label);
        scores.push_back(std::move(c.scores));
    }
    out.predict_ms = elapsed_ms(start);

    const ConfusionMatrix cm = confusion(truth, predicted, config.n_outputs);
    out.score = f1_macro(cm);
    out.accuracy = accuracy(cm);
    try {
        out.auc = auc_macro(scores, truth);
    } catch (const SingleClassOnly&) {
        out.auc = std::nan("");
    }
}

}  // namespace

RunOutcome run_once(const EsnConfig& config, double ridge_beta, const Task& task,
                    std::uint64_t root_seed) {
    RunOutcome out;
    try {
        if (task.protocol.kind == BenchmarkKind::digits) {
            score_classification(config, ridge_beta, task, root_seed, out);
        } else {
            score_regression(config, ridge_beta, task, root_seed, out);
        }
        if (!std::isfinite(out.score)) {
            out.failed = true;
            out.error = "non-finite score";
        }
    } catch (const Error& e) {
        out.failed = true;
        out.error = e.what();
    }
    if (out.failed) out.score = failure_sentinel(task.score_kind());
    return out;
}

}  // namespace esnlab
