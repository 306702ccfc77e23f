#include "esnlab/models.hpp"

#include "esnlab/errors.hpp"

#include <array>

namespace esnlab {

namespace {

constexpr std::array variants{ReadoutVariant::state_only, ReadoutVariant::input_state,
                              ReadoutVariant::state_feedback,
                              ReadoutVariant::input_state_feedback};
constexpr std::array reservoir_activations{Activation::tanh, Activation::sinc};
constexpr std::array output_activations{Activation::tanh, Activation::identity};
constexpr std::array distributions{WeightDistribution::uniform, WeightDistribution::bivalued,
                                   WeightDistribution::laplace};

char activation_code(Activation a) {
    switch (a) {
        case Activation::tanh: return 'T';
        case Activation::sinc: return 'S';
        case Activation::identity: return 'I';
    }
    return '?';
}

char distribution_code(WeightDistribution d) {
    switch (d) {
        case WeightDistribution::uniform: return 'U';
        case WeightDistribution::bivalued: return 'B';
        case WeightDistribution::laplace: return 'L';
    }
    return '?';
}

}  // namespace

std::string ModelSpec::label() const {
    std::string s = "V0-F?-G?-D?";
    s[1] = static_cast<char>('1' + static_cast<int>(readout_variant));
    s[4] = activation_code(reservoir_activation);
    s[7] = activation_code(output_activation);
    s[10] = distribution_code(weight_distribution);
    return s;
}

ModelSpec parse_model_label(std::string_view label) {
    for (const ModelSpec& spec : enumerate_models()) {
        if (spec.label() == label) return spec;
    }
    throw InvalidConfig("unknown model label '" + std::string(label) +
                        "' (expected e.g. V2-FT-GI-DU)");
}

std::vector<ModelSpec> enumerate_models() {
    std::vector<ModelSpec> specs;
    specs.reserve(48);
    for (auto v : variants)
        for (auto f : reservoir_activations)
            for (auto g : output_activations)
                for (auto d : distributions) specs.push_back({v, f, g, d});
    return specs;
}

ProblemKind problem_kind(BenchmarkKind kind) {
    switch (kind) {
        case BenchmarkKind::narma10: return ProblemKind::prediction;
        case BenchmarkKind::figure8: return ProblemKind::generation;
        case BenchmarkKind::mackey_glass: return ProblemKind::chaotic;
        case BenchmarkKind::digits: return ProblemKind::classification;
    }
    return ProblemKind::prediction;
}

EsnConfig heuristic_defaults(ProblemKind kind) {
    EsnConfig c;
    c.reservoir_density = 0.15;
    c.input_density = 0.95;
    c.input_scale = 1.0;
    c.reservoir_activation = Activation::tanh;
    c.output_activation = Activation::identity;
    c.weight_distribution = WeightDistribution::uniform;
    switch (kind) {
        case ProblemKind::prediction:
            c.leak_rate = 0.5;
            c.spectral_radius = 0.8;
            c.readout_variant = ReadoutVariant::input_state;
            break;
        case ProblemKind::generation:
        case ProblemKind::chaotic:
            c.n_inputs = 0;
            c.leak_rate = 0.1;
            c.spectral_radius = 0.95;
            c.feedback_density = 0.95;
            c.feedback_scale = 1.0;
            c.readout_variant = ReadoutVariant::input_state_feedback;
            break;
        case ProblemKind::classification:
            c.n_inputs = 85;
            c.n_outputs = 5;
            c.n_reservoir = 50;
            c.leak_rate = 0.9;
            c.spectral_radius = 0.5;
            c.readout_variant = ReadoutVariant::input_state;
            c.classifier_mode = true;
            break;
    }
    return c;
}

EsnConfig make_config(const ModelSpec& spec, const BenchmarkProtocol& protocol, int n_reservoir) {
    EsnConfig c = heuristic_defaults(problem_kind(protocol.kind));
    c.n_inputs = protocol.n_inputs;
    c.n_outputs = protocol.n_outputs;
    c.n_reservoir = n_reservoir;
    c.noise_scale = protocol.train_noise;
    c.readout_variant = spec.readout_variant;
    c.reservoir_activation = spec.reservoir_activation;
    c.output_activation = spec.output_activation;
    c.weight_distribution = spec.weight_distribution;
    if (!protocol.needs_feedback) {
        c.feedback_density = 0.0;
        c.feedback_scale = 0.0;
    }
    return c;
}

}  // namespace esnlab
