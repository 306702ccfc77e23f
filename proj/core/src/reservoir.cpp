#include "esnlab/reservoir.hpp"

#include "esnlab/errors.hpp"

#include <lapacke.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace esnlab {

namespace {

double draw_weight(WeightDistribution distribution, Rng& rng) {
    switch (distribution) {
        case WeightDistribution::uniform:
            return uniform_pm1(rng);
        case WeightDistribution::bivalued:
            return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
        case WeightDistribution::laplace: {
            // Laplace(0, 1) is a symmetric sign times Exp(1).
            const double magnitude = std::exponential_distribution<double>(1.0)(rng);
            return std::bernoulli_distribution(0.5)(rng) ? magnitude : -magnitude;
        }
    }
    return 0.0;
}

Vector apply(Activation kind, Vector v) {
    for (double& e : v) e = activate(kind, e);
    return v;
}

}  // namespace

Matrix sample_matrix(WeightDistribution distribution, int rows, int cols, double density, Rng& rng) {
    Matrix m = Matrix::Zero(rows, cols);
    if (density <= 0.0) return m;
    std::bernoulli_distribution present(std::min(density, 1.0));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (present(rng)) m(r, c) = draw_weight(distribution, rng);
        }
    }
    return m;
}

double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("spectral_radius: matrix is not square");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    if (n == 0) return 0.0;
    Matrix a = m;  // dgeev overwrites its input
    std::vector<double> wr(static_cast<std::size_t>(n));
    std::vector<double> wi(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(),
                                          wi.data(), nullptr, 1, nullptr, 1);
    if (info != 0) {
        throw DegenerateReservoir("eigenvalue computation failed (dgeev info=" +
                                  std::to_string(info) + ")");
    }
    double radius = 0.0;
    for (lapack_int i = 0; i < n; ++i) radius = std::max(radius, std::hypot(wr[i], wi[i]));
    return radius;
}

Matrix scale_to_spectral_radius(const Matrix& w0, double target, double epsilon) {
    const double radius = spectral_radius(w0);
    if (!(radius > epsilon)) {
        throw DegenerateReservoir("reservoir spectral radius " + std::to_string(radius) +
                                  " is below " + std::to_string(epsilon));
    }
    return (target / radius) * w0;
}

WeightSet build(const EsnConfig& config, std::uint64_t root_seed) {
    validate(config);
    const int n = config.n_reservoir;
    WeightSet w;
    w.root_seed = root_seed;

    bool built = false;
    for (int attempt = 0; attempt < max_reservoir_attempts && !built; ++attempt) {
        Rng rng(derive_seed(root_seed, {static_cast<std::uint64_t>(Stream::reservoir),
                                        static_cast<std::uint64_t>(attempt)}));
        const Matrix w0 =
            sample_matrix(config.weight_distribution, n, n, config.reservoir_density, rng);
        const double radius = spectral_radius(w0);
        if (!(radius > default_eigen_epsilon)) continue;
        const double factor = config.spectral_radius / radius;
        w.reservoir = (factor * w0).sparseView();
        w.reservoir.makeCompressed();
        w.realized_spectral_radius = factor * radius;
        built = true;
    }
    if (!built) {
        throw DegenerateReservoir("no non-degenerate reservoir after " +
                                  std::to_string(max_reservoir_attempts) + " attempts");
    }

    {
        Rng rng = stream_rng(root_seed, Stream::input);
        w.input = config.input_scale * sample_matrix(config.weight_distribution, n,
                                                     config.input_columns(),
                                                     config.input_density, rng);
    }
    if (config.uses_feedback_weights()) {
        Rng rng = stream_rng(root_seed, Stream::feedback);
        w.feedback = config.feedback_scale * sample_matrix(config.weight_distribution, n,
                                                           config.n_outputs,
                                                           config.feedback_density, rng);
    } else {
        w.feedback = Matrix::Zero(n, config.n_outputs);
    }
    return w;
}

double activate(Activation kind, double x) {
    switch (kind) {
        case Activation::tanh:
            return std::tanh(x);
        case Activation::identity:
            return x;
        case Activation::sinc: {
            const double px = std::numbers::pi * x;
            if (std::abs(x) < 1e-8) return 1.0 - px * px / 6.0;
            return std::sin(px) / px;
        }
    }
    return x;
}

ReservoirState zero_state(const EsnConfig& config) {
    return {Vector::Zero(config.n_reservoir), Vector::Zero(config.n_outputs), 0};
}

ReservoirState random_state(const EsnConfig& config, std::uint64_t root_seed) {
    Rng rng = stream_rng(root_seed, Stream::initial_state);
    ReservoirState s = zero_state(config);
    for (double& e : s.x) e = uniform_pm1(rng);
    return s;
}

void step_in_place(ReservoirState& state, std::span<const double> input,
                   std::span<const double> noise, const WeightSet& weights,
                   const EsnConfig& config) {
    const int n = config.n_reservoir;
    if (state.x.size() != n || state.y_prev.size() != config.n_outputs)
        throw DimensionMismatch("step: state does not match the config");
    if (static_cast<int>(input.size()) != config.n_inputs)
        throw DimensionMismatch("step: expected " + std::to_string(config.n_inputs) +
                                " inputs, got " + std::to_string(input.size()));
    if (!noise.empty() && static_cast<int>(noise.size()) != n)
        throw DimensionMismatch("step: noise length must equal n_reservoir");

    Vector pre = weights.reservoir * state.x;
    int col = 0;
    if (config.bias_enabled) pre += weights.input.col(col++);
    if (!input.empty()) {
        const Eigen::Map<const Vector> u(input.data(), static_cast<Eigen::Index>(input.size()));
        pre.noalias() += weights.input.middleCols(col, config.n_inputs) * u;
    }
    if (config.uses_feedback_weights()) pre.noalias() += weights.feedback * state.y_prev;

    const double a = config.leak_rate;
    state.x = (1.0 - a) * state.x + a * apply(config.reservoir_activation, std::move(pre));
    if (!noise.empty() && config.noise_scale > 0.0) {
        const Eigen::Map<const Vector> v(noise.data(), n);
        state.x += config.noise_scale * v;
    }
    ++state.time_index;
    if (!state.x.allFinite()) {
        throw NonFiniteState("reservoir state became non-finite at t=" +
                             std::to_string(state.time_index));
    }
}

ReservoirState step(const ReservoirState& state, std::span<const double> input,
                    std::span<const double> noise, const WeightSet& weights,
                    const EsnConfig& config) {
    ReservoirState next = state;
    step_in_place(next, input, noise, weights, config);
    return next;
}

void concatenate(ReadoutVariant variant, const ReservoirState& state, std::span<const double> input,
                 Eigen::Ref<Vector> out) {
    const auto k = static_cast<Eigen::Index>(input.size());
    const Eigen::Index n = state.x.size();
    const Eigen::Index l = state.y_prev.size();
    Eigen::Index expected = n;
    if (has_input_term(variant)) expected += 1 + k;
    if (has_output_term(variant)) expected += l;
    if (out.size() != expected) throw DimensionMismatch("concatenate: output length mismatch");

    Eigen::Index pos = 0;
    if (has_input_term(variant)) {
        out[pos++] = 1.0;
        for (double u : input) out[pos++] = u;
    }
    out.segment(pos, n) = state.x;
    pos += n;
    if (has_output_term(variant)) out.segment(pos, l) = state.y_prev;
}

Vector readout(ReadoutVariant variant, ReservoirState& state, std::span<const double> input,
               const Matrix& w_out, Activation output_activation) {
    const int length = readout_length(variant, static_cast<int>(input.size()),
                                      static_cast<int>(state.x.size()),
                                      static_cast<int>(state.y_prev.size()));
    if (w_out.cols() != length) {
        throw DimensionMismatch("readout: W_out has " + std::to_string(w_out.cols()) +
                                " columns, variant needs " + std::to_string(length));
    }
    if (has_output_term(variant) && w_out.rows() != state.y_prev.size())
        throw DimensionMismatch("readout: W_out rows must equal the output count");
    Vector z(length);
    concatenate(variant, state, input, z);
    Vector y = apply(output_activation, w_out * z);
    state.y_prev = y;
    return y;
}

}  // namespace esnlab
