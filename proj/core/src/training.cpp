#include "esnlab/training.hpp"

#include "esnlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace esnlab {

namespace {

std::span<const double> column(const Matrix& m, Eigen::Index c) {
    return {m.data() + c * m.rows(), static_cast<std::size_t>(m.rows())};
}

// Draws one noise vector when the scale is active; an empty span otherwise.
std::span<const double> draw_noise(Vector& buffer, double scale, Rng& rng) {
    if (!(scale > 0.0)) return {};
    for (double& v : buffer) v = uniform_pm1(rng);
    return {buffer.data(), static_cast<std::size_t>(buffer.size())};
}

Vector apply_output(Activation g, Vector v) {
    for (double& e : v) e = activate(g, e);
    return v;
}

void check_sequence_shapes(const EsnConfig& config, const Matrix& inputs, const Matrix& teacher) {
    if (inputs.rows() != config.n_inputs)
        throw DimensionMismatch("inputs must have n_inputs rows");
    if (teacher.rows() != config.n_outputs)
        throw DimensionMismatch("teacher must have n_outputs rows");
    if (inputs.cols() != teacher.cols())
        throw DimensionMismatch("inputs and teacher must have the same length");
}

}  // namespace

HarvestResult harvest(const WeightSet& weights, const EsnConfig& config, const Matrix& inputs,
                      const Matrix& teacher, int washout, Rng& noise_rng,
                      std::optional<ReservoirState> initial) {
    check_sequence_shapes(config, inputs, teacher);
    const auto steps = teacher.cols();
    if (washout < 0 || washout >= steps) {
        throw WashoutTooLarge("washout " + std::to_string(washout) + " leaves no samples out of " +
                              std::to_string(steps));
    }
    const int length = config.readout_length();
    HarvestResult out;
    out.design.resize(length, steps - washout);
    out.targets = teacher.rightCols(steps - washout);

    ReservoirState state = initial ? std::move(*initial) : zero_state(config);
    Vector noise(config.n_reservoir);
    for (Eigen::Index t = 0; t < steps; ++t) {
        const auto u = column(inputs, t);
        step_in_place(state, u, draw_noise(noise, config.noise_scale, noise_rng), weights, config);
        if (t >= washout) concatenate(config.readout_variant, state, u, out.design.col(t - washout));
        state.y_prev = teacher.col(t);
    }
    out.final_state = std::move(state);
    return out;
}

Matrix output_inverse_transform(Activation output_activation, const Matrix& targets) {
    if (output_activation != Activation::tanh) return targets;
    return targets.unaryExpr([](double v) {
        return std::atanh(std::clamp(v, -tanh_target_bound, tanh_target_bound));
    });
}

Matrix fit_ridge(const Matrix& design, const Matrix& targets, double beta) {
    if (!(beta >= 0.0)) throw InvalidConfig("ridge beta must be >= 0");
    if (design.cols() == 0) throw DimensionMismatch("fit_ridge: design matrix has no columns");
    if (design.cols() != targets.cols())
        throw DimensionMismatch("fit_ridge: design and targets differ in sample count");

    const Eigen::Index m = design.rows();
    Matrix gram = Matrix::Zero(m, m);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(design);
    gram.diagonal().array() += beta;
    const Matrix rhs = design * targets.transpose();

    const Eigen::LDLT<Matrix, Eigen::Lower> solver(gram);
    if (solver.info() != Eigen::Success)
        throw SingularSystem("fit_ridge: factorization failed");
    if (beta == 0.0 && !(solver.rcond() > 1.0 / max_condition_number)) {
        throw SingularSystem("fit_ridge: Z Z^T is numerically singular (condition estimate " +
                             std::to_string(1.0 / solver.rcond()) + ")");
    }
    Matrix w_out = solver.solve(rhs).transpose();
    if (!w_out.allFinite()) throw SingularSystem("fit_ridge: solution is not finite");
    return w_out;
}

TrainedModel train(const WeightSet& weights, const EsnConfig& config, const Matrix& inputs,
                   const Matrix& teacher, int washout, double beta, Rng& noise_rng) {
    HarvestResult h = harvest(weights, config, inputs, teacher, washout, noise_rng);
    TrainedModel model;
    model.config = config;
    model.weights = weights;
    model.w_out = fit_ridge(h.design, output_inverse_transform(config.output_activation, h.targets),
                            beta);
    model.ridge_beta = beta;
    model.washout = washout;
    model.final_state = std::move(h.final_state);
    return model;
}

TrainedModel train(const WeightSet& weights, const EsnConfig& config,
                   const SequenceDataset& dataset, double beta, Rng& noise_rng) {
    return train(weights, config, dataset.train_inputs(), dataset.train_targets(),
                 dataset.washout_train, beta, noise_rng);
}

Matrix apply_readout(const TrainedModel& model, const Matrix& design) {
    Matrix out(model.w_out.rows(), design.cols());
    Vector z(design.rows());
    for (Eigen::Index j = 0; j < design.cols(); ++j) {
        z = design.col(j);
        out.col(j) = apply_output(model.config.output_activation, model.w_out * z);
    }
    return out;
}

Matrix predict(const TrainedModel& model, const Matrix& inputs, PredictMode mode, int horizon,
               double noise_scale, ReservoirState& state, Rng& noise_rng, const Matrix* teacher) {
    EsnConfig config = model.config;
    config.noise_scale = noise_scale;
    if (mode == PredictMode::free_run && !config.has_output_path()) {
        throw FreeRunWithoutFeedback(
            "free-running generation needs feedback weights or an output term in the readout");
    }
    if (horizon < 0) throw DimensionMismatch("predict: negative horizon");
    if (inputs.rows() != config.n_inputs || inputs.cols() < horizon)
        throw DimensionMismatch("predict: inputs must be n_inputs x horizon");
    if (mode == PredictMode::teacher_forced &&
        (teacher == nullptr || teacher->rows() != config.n_outputs || teacher->cols() < horizon))
        throw DimensionMismatch("predict: teacher forcing needs an n_outputs x horizon teacher");

    Matrix out(config.n_outputs, horizon);
    Vector noise(config.n_reservoir);
    for (int t = 0; t < horizon; ++t) {
        const auto u = column(inputs, t);
        step_in_place(state, u, draw_noise(noise, noise_scale, noise_rng), model.weights, config);
        out.col(t) = readout(config.readout_variant, state, u, model.w_out, config.output_activation);
        if (!out.col(t).allFinite())
            throw NonFiniteState("prediction became non-finite at step " + std::to_string(t));
        if (mode == PredictMode::teacher_forced) state.y_prev = teacher->col(t);
    }
    return out;
}

Matrix predict(const TrainedModel& model, const Matrix& inputs, PredictMode mode, int horizon,
               const Matrix* teacher) {
    ReservoirState state = zero_state(model.config);
    Rng unused(0);
    return predict(model, inputs, mode, horizon, 0.0, state, unused, teacher);
}

Vector one_hot_target(int label, int n_classes, Activation output_activation) {
    Vector t = Vector::Zero(n_classes);
    if (label < 0 || label >= n_classes) throw UnknownLabel("label " + std::to_string(label));
    t[label] = output_activation == Activation::tanh ? tanh_target_bound : 1.0;
    return t;
}

Vector average_group_concatenation(const WeightSet& weights, const EsnConfig& config,
                                   const Group& group, int washout, const Vector& teacher,
                                   const Matrix* w_out) {
    if (group.length() == 0 || group.length() <= washout)
        throw EmptyGroup("group " + std::to_string(group.group_id) + " has no samples after washout");
    if (group.features.rows() != config.n_inputs)
        throw DimensionMismatch("group features must have n_inputs rows");

    ReservoirState state = zero_state(config);
    Vector sum = Vector::Zero(config.readout_length());
    Vector z(config.readout_length());
    for (int t = 0; t < group.length(); ++t) {
        const auto u = column(group.features, t);
        step_in_place(state, u, {}, weights, config);
        concatenate(config.readout_variant, state, u, z);
        if (t >= washout) sum += z;
        if (teacher.size() > 0) {
            state.y_prev = teacher;
        } else if (w_out != nullptr) {
            state.y_prev = apply_output(config.output_activation, *w_out * z);
        }
    }
    return sum / static_cast<double>(group.length() - washout);
}

TrainedModel fit_classifier(const WeightSet& weights, const EsnConfig& config,
                            const GroupedDataset& train_set, int washout_per_group, double beta) {
    if (train_set.groups.empty()) throw EmptyGroup("fit_classifier: no training groups");
    const auto n_groups = static_cast<Eigen::Index>(train_set.groups.size());
    Matrix design(config.readout_length(), n_groups);
    Matrix targets(config.n_outputs, n_groups);
    for (Eigen::Index j = 0; j < n_groups; ++j) {
        const Group& g = train_set.groups[static_cast<std::size_t>(j)];
        const Vector teacher = one_hot_target(g.label, config.n_outputs, config.output_activation);
        design.col(j) = average_group_concatenation(weights, config, g, washout_per_group, teacher);
        targets.col(j) = teacher;
    }
    TrainedModel model;
    model.config = config;
    model.weights = weights;
    model.w_out = fit_ridge(design, output_inverse_transform(config.output_activation, targets), beta);
    model.ridge_beta = beta;
    model.washout = washout_per_group;
    model.final_state = zero_state(config);
    return model;
}

int argmax(const Vector& scores) {
    int best = 0;
    for (int i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

Classification classify(const TrainedModel& model, const Group& group) {
    const Vector avg = average_group_concatenation(model.weights, model.config, group,
                                                   model.washout, Vector{}, &model.w_out);
    Classification c;
    c.scores = apply_output(model.config.output_activation, model.w_out * avg);
    c.label = argmax(c.scores);
    return c;
}

}  // namespace esnlab
