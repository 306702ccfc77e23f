#pragma once

#include "esnlab/config.hpp"
#include "esnlab/experiment.hpp"
#include "esnlab/harness.hpp"
#include "esnlab/hpo.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esnlab {

/// Shortest decimal text that parses back to the same double; "inf",
/// "-inf" and "nan" for the special values.
std::string format_double(double value);

/// Inverse of format_double. Throws MalformedRecord on bad text.
double parse_double(std::string_view text);

/// A config file: EsnConfig field names plus an optional "ridge_beta".
struct ConfigFile {
    EsnConfig config;
    std::optional<double> ridge_beta;
};

std::string config_to_json(const EsnConfig& config, std::optional<double> ridge_beta = std::nullopt);
/// Missing fields keep their EsnConfig defaults; unknown fields are rejected.
ConfigFile config_from_json(std::string_view text);

std::string params_to_json(const TunedParams& params);
/// Accepts a bare parameter object or a study record (its best trial's parameters).
TunedParams params_from_json(std::string_view text);

/// Everything the harness persists. JSON documents hold any mix; CSV holds
/// sweep records only.
struct ResultSet {
    std::vector<SweepRecord> sweeps;
    std::vector<StudyRecord> studies;
    std::vector<ComplexityFit> fits;
};

enum class ExportFormat { csv, json };

ExportFormat parse_export_format(std::string_view s);

std::string study_to_json(const StudyRecord& study);
StudyRecord study_from_json(std::string_view text);

/// Serializes a result set. With a single study and nothing else the bare
/// study object is written.
std::string results_to_json(const ResultSet& results);
/// Accepts a result-set object, a bare study / sweep / complexity-fit object,
/// or an array of those.
ResultSet results_from_json(std::string_view text);

/// CSV with the header
///   model_label,benchmark,N,seed,score_name,score,train_ms,predict_ms
/// and one line per (sweep, size, seed).
std::string sweeps_to_csv(std::span<const SweepRecord> sweeps);
/// Regroups CSV lines into sweep records and recomputes their aggregates.
std::vector<SweepRecord> sweeps_from_csv(std::string_view text);

/// Writes `results` to `path`. Throws IoFailure when the file cannot be
/// written and InvalidConfig when CSV is asked to hold studies or fits.
void export_results(const ResultSet& results, const std::filesystem::path& path, ExportFormat format);

/// Reads a file written by export_results; the format follows the content.
ResultSet import_results(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Plot-ready tables derived from a result set:
///   size table: one row per (model, benchmark, N) with the trimmed score
///     and trimmed train/predict times;
///   rankings: models ranked by their score at the largest size and by
///     their improvement from the smallest to the largest size;
///   studies: one row per study with its best score.
std::string report(const ResultSet& results, ExportFormat format);

}  // namespace esnlab
