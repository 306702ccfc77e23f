#pragma once

#include "esnlab/config.hpp"
#include "esnlab/random.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <span>

namespace esnlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Eigenvalue magnitude below which a sampled reservoir counts as degenerate.
inline constexpr double default_eigen_epsilon = 1e-12;

/// Draws of W before build() gives up: the first one plus 8 resamples.
inline constexpr int max_reservoir_attempts = 9;

/// The realized random matrices for one seeded instantiation.
struct WeightSet {
    Matrix input;          // N x (bias + K); column 0 is the bias column when enabled
    SparseMatrix reservoir;  // N x N
    Matrix feedback;       // N x L
    std::uint64_t root_seed = 0;
    double realized_spectral_radius = 0.0;
};

/// The evolving state of one reservoir run.
struct ReservoirState {
    Vector x;
    Vector y_prev;
    std::int64_t time_index = 0;
};

/// Dense rows x cols matrix whose entries are independently nonzero with
/// probability `density`; nonzero values come from the zero-centered unit
/// distribution (uniform on [-1,1), +/-1 equiprobable, or Laplace(0, 1)).
Matrix sample_matrix(WeightDistribution distribution, int rows, int cols, double density, Rng& rng);

/// Largest eigenvalue magnitude of a square matrix (LAPACK dgeev).
double spectral_radius(const Matrix& m);

/// Rescales `w0` so its spectral radius equals `target`.
/// Throws DegenerateReservoir when the spectral radius of `w0` is <= `epsilon`.
Matrix scale_to_spectral_radius(const Matrix& w0, double target,
                                double epsilon = default_eigen_epsilon);

/// Samples W, W_in and W_fb for `config` from child streams of `root_seed`.
/// A degenerate W is resampled with a fresh child seed, at most
/// max_reservoir_attempts draws in total, before DegenerateReservoir is propagated.
WeightSet build(const EsnConfig& config, std::uint64_t root_seed);

/// tanh(x), sin(pi x)/(pi x) with sinc(0) = 1, or x.
double activate(Activation kind, double x);

/// Zero reservoir state and zero previous output.
ReservoirState zero_state(const EsnConfig& config);

/// State with entries drawn uniformly from [-1, 1) using the initial-state stream.
ReservoirState random_state(const EsnConfig& config, std::uint64_t root_seed);

/// Leaky-integrator update with additive noise:
///   x' = (1 - a) x + a f(W_in [1; u] + W x + W_fb y_prev) + s_v v
/// `noise` may be empty, which is equivalent to all zeros.
/// Advances time_index; y_prev is left for the readout to update.
/// Throws NonFiniteState when the new state has a non-finite entry.
void step_in_place(ReservoirState& state, std::span<const double> input,
                   std::span<const double> noise, const WeightSet& weights,
                   const EsnConfig& config);

ReservoirState step(const ReservoirState& state, std::span<const double> input,
                    std::span<const double> noise, const WeightSet& weights,
                    const EsnConfig& config);

/// Writes the variant's concatenation ([x], [1,u,x], [x,y_prev] or
/// [1,u,x,y_prev]) into `out`, which must already have the right length.
void concatenate(ReadoutVariant variant, const ReservoirState& state, std::span<const double> input,
                 Eigen::Ref<Vector> out);

/// y = g(W_out z) for the variant's concatenation z; stores y into state.y_prev.
/// Throws DimensionMismatch when W_out's column count does not fit the variant.
Vector readout(ReadoutVariant variant, ReservoirState& state, std::span<const double> input,
               const Matrix& w_out, Activation output_activation);

}  // namespace esnlab
