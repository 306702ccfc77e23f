#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace esnlab {

enum class BenchmarkKind { narma10, figure8, mackey_glass, digits };

std::string_view to_string(BenchmarkKind kind);
/// Accepts "narma10", "figure8", "mackey-glass" and "digits" (plus the
/// "digits-synthetic" alias used by the CLI).
BenchmarkKind parse_benchmark(std::string_view name);

/// Regression time series with train/test/washout bookkeeping.
/// The test split is the contiguous continuation of the train split.
struct SequenceDataset {
    Eigen::MatrixXd inputs;   // K x T
    Eigen::MatrixXd targets;  // L x T
    int train_len = 0;
    int test_len = 0;
    int washout_train = 0;
    int washout_test = 0;
    std::string benchmark_name;
    std::uint64_t generator_seed = 0;

    int total_len() const { return static_cast<int>(targets.cols()); }
    Eigen::MatrixXd train_inputs() const { return inputs.leftCols(train_len); }
    Eigen::MatrixXd train_targets() const { return targets.leftCols(train_len); }
    Eigen::MatrixXd test_inputs() const { return inputs.middleCols(train_len, test_len); }
    Eigen::MatrixXd test_targets() const { return targets.middleCols(train_len, test_len); }
};

/// One labeled time series; features are K x tau with samples in chronological order.
struct Group {
    long group_id = 0;
    int label = 0;
    Eigen::MatrixXd features;

    int length() const { return static_cast<int>(features.cols()); }
    bool operator==(const Group&) const = default;
};

struct GroupedDataset {
    std::vector<Group> groups;
    int n_classes = 5;
    int n_channels = 85;

    std::vector<int> class_counts() const;
    bool operator==(const GroupedDataset&) const = default;
};

/// Sample counts, washouts and noise levels for one benchmark.
struct BenchmarkProtocol {
    BenchmarkKind kind = BenchmarkKind::narma10;
    int total_len = 0;
    int train_len = 0;
    int test_len = 0;
    int washout_train = 0;
    int washout_test = 0;
    double train_noise = 0.0;
    double predict_noise = 0.0;
    int n_inputs = 1;
    int n_outputs = 1;
    bool needs_feedback = false;
    int study_reservoir_size = 100;
    int study_trials = 150;
    double train_fraction = 0.0;  // digits only
    double test_fraction = 0.0;   // digits only
};

/// Built-in protocol presets:
///   narma10       3400 samples, 1200 train / 2200 test, washout 200 on both,
///                 training noise 1e-4, N=100, 150 trials
///   figure8       23000 samples, 3000 train / 20000 test, washout 1000 on both,
///                 prediction noise 0.01, N=20, 150 trials
///   mackey_glass  4000 samples after dropping 100, 2000 / 2000, washout 100
///                 (training only), no noise, 150 trials
///   digits        85 channels, 5 classes, 60% / 20% split, N=50, 50 trials
BenchmarkProtocol protocol(BenchmarkKind kind);

/// Clipping bound applied to one-hot and tanh-inverted targets.
inline constexpr double tanh_target_bound = 0.99999;

inline constexpr double narma_divergence_bound = 10.0;

/// NARMA-10 with inputs m ~ U[0, 0.5) and d(0..9) = 0:
///   d(n+1) = 0.3 d(n) + 0.05 d(n) sum_{i=0..9} d(n-i) + 1.5 m(n-9) m(n) + 0.1
/// If |d| exceeds narma_divergence_bound the sequence is regenerated with
/// seed + 1, seed + 2, ...; generator_seed records the seed actually used.
/// Throws NonFiniteState if 1000 consecutive seeds all diverge.
SequenceDataset gen_narma10(int total_len = 3400, std::uint64_t seed = 0);

/// The NARMA-10 recursion for a given input sequence (no divergence check).
std::vector<double> narma10_response(const std::vector<double>& m);

/// Lazy figure-8: (sin(2 pi k/100), cos(pi k/100)); no inputs besides the bias.
SequenceDataset gen_figure8(int total_len = 23000);

/// The 18-sample starting history of the tau=17 Mackey-Glass sequence.
const std::vector<double>& mackey_glass_history();

/// Mackey-Glass integrated by forward Euler at dt=1 from the 18-sample history:
///   y(t+1) = y(t) + 0.2 y(t-tau) / (1 + y(t-tau)^10) - 0.1 y(t)
/// total_len + drop samples are produced and the first `drop` discarded.
SequenceDataset gen_mackey_glass(int total_len = 4000, int tau = 17, int drop = 100);

/// The full undropped Mackey-Glass series of length `n`.
std::vector<double> mackey_glass_series(int n, int tau = 17);

/// Parses the digit feature file: "group_id,label,f_1,...,f_85" per row,
/// rows of one group contiguous, optional header row. Labels 5-9 are dropped.
GroupedDataset load_digit_features(const std::filesystem::path& path, int n_channels = 85);

/// Writes a dataset in the format read by load_digit_features.
void export_digit_features(const GroupedDataset& dataset, const std::filesystem::path& path);

/// Synthetic stand-in for the spoken-digit features: each class has a random
/// per-channel mean template scaled by class_separation; samples are template
/// plus unit-variance Gaussian noise.
GroupedDataset gen_synthetic_digits(int n_classes, int n_channels, int groups_per_class,
                                    int samples_per_group, double class_separation,
                                    std::uint64_t seed);

/// Shuffles whole groups by seed, then takes floor(train_frac * G) groups
/// for training and floor(test_frac * G) for testing.
std::pair<GroupedDataset, GroupedDataset> split_grouped(const GroupedDataset& dataset,
                                                        double train_frac, double test_frac,
                                                        std::uint64_t seed);

}  // namespace esnlab
