#pragma once

#include "esnlab/benchmarks.hpp"
#include "esnlab/config.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace esnlab {

/// One node of the architecture tree: readout wiring, activations and
/// weight distribution.
///
/// Labels have the form "V{1-4}-F{T|S}-G{T|I}-D{U|B|L}":
///   V1 state_only, V2 input_state, V3 state_feedback, V4 input_state_feedback
///   FT tanh reservoir, FS sinc reservoir
///   GT tanh output, GI identity output
///   DU uniform, DB bivalued, DL laplace weights
struct ModelSpec {
    ReadoutVariant readout_variant = ReadoutVariant::state_only;
    Activation reservoir_activation = Activation::tanh;
    Activation output_activation = Activation::tanh;
    WeightDistribution weight_distribution = WeightDistribution::uniform;

    std::string label() const;
    bool operator==(const ModelSpec&) const = default;
};

ModelSpec parse_model_label(std::string_view label);

/// All 48 specs ordered by (variant, reservoir activation, output activation,
/// distribution) in the enum orders above.
std::vector<ModelSpec> enumerate_models();

enum class ProblemKind { prediction, generation, chaotic, classification };

ProblemKind problem_kind(BenchmarkKind kind);

/// Guideline-derived starting configuration:
///   all kinds       d_W = 0.15, d_in = 0.95
///   prediction      alpha = 0.5, rho = 0.8, no feedback, input_state readout
///   generation,
///   chaotic         alpha = 0.1, rho = 0.95, d_fb = 0.95, s_fb = 1,
///                   input_state_feedback readout
///   classification  alpha = 0.9, rho = 0.5, classifier_mode
EsnConfig heuristic_defaults(ProblemKind kind);

/// Ridge coefficient paired with heuristic_defaults when nothing was tuned.
inline constexpr double heuristic_ridge_beta = 1e-6;

/// The heuristic template for a benchmark with the model's architecture
/// switches, the protocol's K, L and noise, and `n_reservoir` neurons.
EsnConfig make_config(const ModelSpec& spec, const BenchmarkProtocol& protocol, int n_reservoir);

}  // namespace esnlab
