#include "esnlab/config.hpp"

#include "esnlab/errors.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace esnlab {

namespace {

template <typename E, std::size_t M>
E parse_enum(std::string_view s, const std::array<std::pair<std::string_view, E>, M>& table,
             std::string_view what) {
    for (const auto& [name, value] : table) {
        if (name == s) return value;
    }
    throw InvalidConfig("unknown " + std::string(what) + ": '" + std::string(s) + "'");
}

constexpr std::array<std::pair<std::string_view, Activation>, 3> activation_names{{
    {"tanh", Activation::tanh},
    {"sinc", Activation::sinc},
    {"identity", Activation::identity},
}};

constexpr std::array<std::pair<std::string_view, ReadoutVariant>, 4> variant_names{{
    {"state_only", ReadoutVariant::state_only},
    {"input_state", ReadoutVariant::input_state},
    {"state_feedback", ReadoutVariant::state_feedback},
    {"input_state_feedback", ReadoutVariant::input_state_feedback},
}};

constexpr std::array<std::pair<std::string_view, WeightDistribution>, 3> distribution_names{{
    {"uniform", WeightDistribution::uniform},
    {"bivalued", WeightDistribution::bivalued},
    {"laplace", WeightDistribution::laplace},
}};

template <typename E, std::size_t M>
std::string_view name_of(E value, const std::array<std::pair<std::string_view, E>, M>& table) {
    for (const auto& [name, v] : table) {
        if (v == value) return name;
    }
    return "?";
}

bool in_unit_interval(double d) { return d >= 0.0 && d <= 1.0; }

}  // namespace

std::string_view to_string(Activation a) { return name_of(a, activation_names); }
std::string_view to_string(ReadoutVariant v) { return name_of(v, variant_names); }
std::string_view to_string(WeightDistribution d) { return name_of(d, distribution_names); }

Activation parse_activation(std::string_view s) {
    return parse_enum(s, activation_names, "activation");
}
ReadoutVariant parse_readout_variant(std::string_view s) {
    return parse_enum(s, variant_names, "readout variant");
}
WeightDistribution parse_weight_distribution(std::string_view s) {
    return parse_enum(s, distribution_names, "weight distribution");
}

int readout_length(ReadoutVariant v, int n_inputs, int n_reservoir, int n_outputs) {
    int len = n_reservoir;
    if (has_input_term(v)) len += 1 + n_inputs;
    if (has_output_term(v)) len += n_outputs;
    return len;
}

int EsnConfig::readout_length() const {
    return esnlab::readout_length(readout_variant, n_inputs, n_reservoir, n_outputs);
}

std::vector<std::string> validate(const EsnConfig& c) {
    auto fail = [](const std::string& msg) { throw InvalidConfig(msg); };
    if (c.n_reservoir < 1) fail("n_reservoir must be >= 1");
    if (c.n_outputs < 1) fail("n_outputs must be >= 1");
    if (c.n_inputs < 0) fail("n_inputs must be >= 0");
    if (!(c.leak_rate > 0.0 && c.leak_rate <= 1.0)) fail("leak_rate must lie in (0, 1]");
    if (!(c.spectral_radius > 0.0) || !std::isfinite(c.spectral_radius))
        fail("spectral_radius must be positive");
    if (!in_unit_interval(c.reservoir_density) || !in_unit_interval(c.input_density) ||
        !in_unit_interval(c.feedback_density))
        fail("densities must lie in [0, 1]");
    if (!(c.input_scale >= 0.0) || !(c.feedback_scale >= 0.0) || !(c.noise_scale >= 0.0))
        fail("scales must be >= 0");
    if (c.output_activation == Activation::sinc)
        fail("output_activation must be tanh or identity");
    if (c.reservoir_activation == Activation::identity)
        fail("reservoir_activation must be tanh or sinc");

    std::vector<std::string> warnings;
    if (c.spectral_radius >= 1.0) {
        warnings.emplace_back("spectral_radius >= 1: the echo state property is not guaranteed");
    }
    return warnings;
}

}  // namespace esnlab
