#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace esnlab {

enum class Activation { tanh, sinc, identity };

/// Which vectors are concatenated before the trained readout.
///   state_only             [x]
///   input_state            [1, u, x]
///   state_feedback         [x, y_prev]
///   input_state_feedback   [1, u, x, y_prev]
enum class ReadoutVariant { state_only, input_state, state_feedback, input_state_feedback };

enum class WeightDistribution { uniform, bivalued, laplace };

std::string_view to_string(Activation a);
std::string_view to_string(ReadoutVariant v);
std::string_view to_string(WeightDistribution d);

Activation parse_activation(std::string_view s);
ReadoutVariant parse_readout_variant(std::string_view s);
WeightDistribution parse_weight_distribution(std::string_view s);

/// True when the readout concatenation contains the constant bias and the input.
constexpr bool has_input_term(ReadoutVariant v) {
    return v == ReadoutVariant::input_state || v == ReadoutVariant::input_state_feedback;
}

/// True when the readout concatenation contains the previous output.
constexpr bool has_output_term(ReadoutVariant v) {
    return v == ReadoutVariant::state_feedback || v == ReadoutVariant::input_state_feedback;
}

/// Hyperparameters and architecture switches for one ESN variant.
struct EsnConfig {
    int n_inputs = 1;     // K
    int n_reservoir = 100;  // N
    int n_outputs = 1;    // L

    double spectral_radius = 0.9;
    double leak_rate = 1.0;
    double reservoir_density = 0.15;
    double input_density = 0.95;
    double feedback_density = 0.0;
    double input_scale = 1.0;
    double feedback_scale = 0.0;
    double noise_scale = 0.0;

    Activation reservoir_activation = Activation::tanh;
    Activation output_activation = Activation::identity;
    ReadoutVariant readout_variant = ReadoutVariant::input_state;
    WeightDistribution weight_distribution = WeightDistribution::uniform;
    bool bias_enabled = true;
    bool classifier_mode = false;

    /// Columns of W_in: one per input plus the bias column.
    int input_columns() const { return n_inputs + (bias_enabled ? 1 : 0); }

    /// Length of the readout concatenation for this config's variant.
    int readout_length() const;

    /// True when the W_fb path is live (nonzero density and scale).
    bool uses_feedback_weights() const { return feedback_density > 0.0 && feedback_scale > 0.0; }

    /// True when a previous output influences either the reservoir or the readout.
    bool has_output_path() const {
        return uses_feedback_weights() || has_output_term(readout_variant);
    }

    bool operator==(const EsnConfig&) const = default;
};

/// Readout concatenation length for a variant: N, 1+K+N, N+L or 1+K+N+L.
int readout_length(ReadoutVariant v, int n_inputs, int n_reservoir, int n_outputs);

/// Throws InvalidConfig on a hard violation; returns non-fatal warnings
/// (currently: spectral radius at or above 1).
std::vector<std::string> validate(const EsnConfig& config);

}  // namespace esnlab
