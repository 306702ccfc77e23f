#pragma once

#include "esnlab/benchmarks.hpp"
#include "esnlab/config.hpp"
#include "esnlab/reservoir.hpp"

#include <optional>
#include <vector>

namespace esnlab {

/// A config and weight set with a fitted readout.
struct TrainedModel {
    EsnConfig config;
    WeightSet weights;
    Matrix w_out;  // L x readout_length
    double ridge_beta = 0.0;
    int washout = 0;
    /// Reservoir state after the last training step; prediction may continue from it.
    ReservoirState final_state;
};

/// States collected under teacher forcing.
struct HarvestResult {
    Matrix design;   // readout_length x (T - washout)
    Matrix targets;  // L x (T - washout)
    ReservoirState final_state;
};

/// Condition-number threshold above which an unregularized solve is refused.
inline constexpr double max_condition_number = 1e12;

/// Drives the reservoir through `inputs` (K x T) while feeding the teacher
/// (L x T) back as the previous output, starting from `initial` (y(-1) is its
/// y_prev). Collects concatenations for t = washout .. T-1. Noise of scale
/// config.noise_scale is drawn from `noise_rng` each step when the scale is
/// positive.
HarvestResult harvest(const WeightSet& weights, const EsnConfig& config, const Matrix& inputs,
                      const Matrix& teacher, int washout, Rng& noise_rng,
                      std::optional<ReservoirState> initial = std::nullopt);

/// identity: unchanged; tanh: arctanh after clipping into [-0.99999, 0.99999].
Matrix output_inverse_transform(Activation output_activation, const Matrix& targets);

/// W_out = Y Z^T (Z Z^T + beta I)^-1 via a symmetric LDL^T solve.
/// Throws SingularSystem when beta == 0 and Z Z^T is numerically singular.
Matrix fit_ridge(const Matrix& design, const Matrix& targets, double beta);

/// harvest + output_inverse_transform + fit_ridge.
TrainedModel train(const WeightSet& weights, const EsnConfig& config, const Matrix& inputs,
                   const Matrix& teacher, int washout, double beta, Rng& noise_rng);

/// Trains on the dataset's train split with its training washout.
TrainedModel train(const WeightSet& weights, const EsnConfig& config,
                   const SequenceDataset& dataset, double beta, Rng& noise_rng);

/// g(W_out z) for every column of a design matrix, evaluated column by column
/// exactly as readout() does.
Matrix apply_readout(const TrainedModel& model, const Matrix& design);

enum class PredictMode { teacher_forced, free_run };

/// Runs the trained model for `horizon` steps from `state`, which is updated
/// in place so a later call can continue. `inputs` is K x horizon (K may be 0).
/// teacher_forced feeds `teacher` (L x horizon) back as the previous output;
/// free_run feeds the model's own output. Noise of `noise_scale` replaces the
/// config's noise scale for the duration of the call.
/// Throws FreeRunWithoutFeedback when free_run is requested for a model
/// without any output path.
Matrix predict(const TrainedModel& model, const Matrix& inputs, PredictMode mode, int horizon,
               double noise_scale, ReservoirState& state, Rng& noise_rng,
               const Matrix* teacher = nullptr);

/// Convenience overload starting from the zero state with no noise.
Matrix predict(const TrainedModel& model, const Matrix& inputs, PredictMode mode, int horizon,
               const Matrix* teacher = nullptr);

/// Time-averaged concatenation of one group, from a zero state, skipping the
/// first `washout` samples. `teacher` (length L, may be empty) is fed back as
/// the previous output after the first step; without it the per-step readout
/// of `w_out` is fed back instead.
Vector average_group_concatenation(const WeightSet& weights, const EsnConfig& config,
                                   const Group& group, int washout, const Vector& teacher,
                                   const Matrix* w_out = nullptr);

/// One-hot targets for a label; 0.99999 replaces 1 when g = tanh.
Vector one_hot_target(int label, int n_classes, Activation output_activation);

/// Fits the averaged-state classifier readout: one design column per group.
TrainedModel fit_classifier(const WeightSet& weights, const EsnConfig& config,
                            const GroupedDataset& train_set, int washout_per_group, double beta);

struct Classification {
    Vector scores;
    int label = 0;
};

/// Index of the largest score; ties go to the lowest index.
int argmax(const Vector& scores);

Classification classify(const TrainedModel& model, const Group& group);

}  // namespace esnlab
