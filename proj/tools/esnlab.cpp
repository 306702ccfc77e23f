#include <esnlab/errors.hpp>
#include <esnlab/harness.hpp>
#include <esnlab/hpo.hpp>
#include <esnlab/io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace esnlab;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_failure = 2;

// Thrown for bad arguments found after parsing; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
    const char* env = std::getenv("ESNLAB_SEED");
    if (!env) return 0;
    const std::string text(env);
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used, 10);
        if (used == text.size() && text.find('-') == std::string::npos) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("ESNLAB_SEED must be a non-negative integer, got '" + text + "'");
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const int n = std::stoi(item, &used);
            if (used != item.size() || n < 1) throw std::invalid_argument(item);
            sizes.push_back(n);
        } catch (const std::exception&) {
            throw UsageError("bad reservoir size '" + item + "' in --sizes");
        }
    }
    if (sizes.empty()) throw UsageError("--sizes is empty");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw UsageError("--sizes must be strictly increasing");
    return sizes;
}

BenchmarkKind benchmark_of(const std::string& name) {
    try {
        return parse_benchmark(name);
    } catch (const InvalidConfig& e) {
        throw UsageError(e.what());
    }
}

ModelSpec model_of(const std::string& label) {
    try {
        return parse_model_label(label);
    } catch (const InvalidConfig& e) {
        throw UsageError(e.what());
    }
}

struct DataOptions {
    std::string benchmark;
    std::string data_path;
    std::uint64_t data_seed = 0;
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
    cmd->add_option("--benchmark", d.benchmark, "narma10, figure8, mackey-glass or digits-synthetic")
        ->required();
    cmd->add_option("--data", d.data_path, "digit feature file (group_id,label,f_1..f_85) for digits");
    cmd->add_option("--data-seed", d.data_seed, "seed of the NARMA-10 inputs and the digit split")
        ->capture_default_str();
}

Task task_of(const DataOptions& d) {
    const BenchmarkKind kind = benchmark_of(d.benchmark);
    if (!d.data_path.empty()) {
        if (kind != BenchmarkKind::digits) throw UsageError("--data only applies to the digits benchmark");
        const BenchmarkProtocol p = protocol(kind);
        return make_digits_task(load_digit_features(d.data_path), d.data_seed, p.train_fraction,
                                p.test_fraction);
    }
    return make_task(kind, d.data_seed);
}

ExportFormat format_of_path(const fs::path& path) {
    return path.extension() == ".csv" ? ExportFormat::csv : ExportFormat::json;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_text_file(path, text);
    }
}

// --- gen ---------------------------------------------------------------------

std::string sequence_csv(const SequenceDataset& ds) {
    std::ostringstream out;
    out << "t,split";
    for (Eigen::Index k = 0; k < ds.inputs.rows(); ++k) out << ",input_" << k;
    for (Eigen::Index l = 0; l < ds.targets.rows(); ++l) out << ",target_" << l;
    out << '\n';
    for (int t = 0; t < ds.total_len(); ++t) {
        out << t << ',' << (t < ds.train_len ? "train" : t < ds.train_len + ds.test_len ? "test" : "unused");
        for (Eigen::Index k = 0; k < ds.inputs.rows(); ++k) out << ',' << format_double(ds.inputs(k, t));
        for (Eigen::Index l = 0; l < ds.targets.rows(); ++l) out << ',' << format_double(ds.targets(l, t));
        out << '\n';
    }
    return out.str();
}

int run_gen(const std::string& benchmark, std::optional<std::uint64_t> seed, const std::string& out) {
    const BenchmarkKind kind = benchmark_of(benchmark);
    const std::uint64_t s = seed.value_or(default_seed());
    if (out.empty()) throw UsageError("--out is required");
    if (kind == BenchmarkKind::digits) {
        const SyntheticDigitsOptions o;
        export_digit_features(
            gen_synthetic_digits(5, 85, o.groups_per_class, o.samples_per_group, o.class_separation, s), out);
        return exit_ok;
    }
    const Task task = make_task(kind, s);
    write_text_file(out, sequence_csv(task.sequence));
    if (kind == BenchmarkKind::narma10 && task.sequence.generator_seed != s)
        std::cerr << "note: NARMA-10 diverged for seed " << s << "; wrote seed "
                  << task.sequence.generator_seed << " instead\n";
    return exit_ok;
}

// --- train -------------------------------------------------------------------

int run_train(const std::string& config_path, const DataOptions& data, std::optional<std::uint64_t> seed,
              std::optional<double> beta_arg, const std::string& out) {
    const Task task = task_of(data);
    ConfigFile file;
    try {
        file = config_from_json(read_text_file(config_path));
    } catch (const MalformedRecord& e) {
        throw UsageError(std::string("config: ") + e.what());
    } catch (const InvalidConfig& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    // the benchmark fixes the input and output counts
    EsnConfig config = file.config;
    config.n_inputs = task.protocol.n_inputs;
    config.n_outputs = task.protocol.n_outputs;
    config.classifier_mode = task.protocol.kind == BenchmarkKind::digits;
    try {
        for (const std::string& w : validate(config)) std::cerr << "warning: " << w << '\n';
    } catch (const InvalidConfig& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    const double beta = beta_arg.value_or(file.ridge_beta.value_or(heuristic_ridge_beta));
    const std::uint64_t root = seed.value_or(default_seed());

    const RunOutcome run = run_once(config, beta, task, root);
    nlohmann::ordered_json j;
    j["benchmark"] = std::string(to_string(task.protocol.kind));
    j["root_seed"] = root;
    j["ridge_beta"] = format_double(beta);
    j["config"] = nlohmann::ordered_json::parse(config_to_json(config));
    j["failed"] = run.failed;
    if (run.failed) j["error"] = run.error;
    j["score_name"] = std::string(to_string(task.score_kind()));
    j["score"] = format_double(run.score);
    if (task.score_kind() == ScoreKind::rmse) {
        j["mae"] = format_double(run.mae);
    } else {
        j["accuracy"] = format_double(run.accuracy);
        j["auc"] = format_double(run.auc);
    }
    j["train_ms"] = format_double(run.train_ms);
    j["predict_ms"] = format_double(run.predict_ms);
    write_output(out, j.dump(2) + "\n");
    if (run.failed) {
        std::cerr << "run failed: " << run.error << '\n';
        return exit_failure;
    }
    return exit_ok;
}

// --- optimize ----------------------------------------------------------------

int run_optimize(const DataOptions& data, const std::string& model, std::optional<int> trials,
                 std::optional<std::uint64_t> study_seed, std::optional<int> n_reservoir, int n_seeds,
                 int threads, const std::string& out) {
    const ModelSpec spec = model_of(model);
    const Task task = task_of(data);
    StudyOptions options;
    options.n_trials = trials.value_or(task.protocol.study_trials);
    options.study_seed = study_seed.value_or(default_seed());
    options.threads = threads;
    if (options.n_trials < 1) throw UsageError("--trials must be >= 1");
    if (n_seeds < 1) throw UsageError("--seeds must be >= 1");
    const int n = n_reservoir.value_or(task.protocol.study_reservoir_size);
    if (n < 1) throw UsageError("--reservoir-size must be >= 1");

    const StudyRecord study =
        run_study(SearchSpace::for_benchmark(task.protocol.kind), spec, task, n, options, n_seeds);
    write_output(out, study_to_json(study) + "\n");
    const TrialRecord& best = study.best_trial();
    std::cerr << study.study_label << ": best trial " << best.trial_index << " "
              << to_string(study.score_kind) << "=" << format_double(best.best_score) << '\n';
    return best.failed ? exit_failure : exit_ok;
}

// --- sweep / profile ---------------------------------------------------------

TunedParams params_for(const std::string& params_path, const ModelSpec& spec, const Task& task) {
    if (params_path.empty()) return tuned_params_of(make_config(spec, task.protocol, 100), heuristic_ridge_beta);
    try {
        return params_from_json(read_text_file(params_path));
    } catch (const MalformedRecord& e) {
        throw UsageError(std::string("params: ") + e.what());
    }
}

int run_sweep(const DataOptions& data, const std::string& model, const std::string& params_path,
              const std::string& sizes_text, int n_seeds, const std::string& out) {
    const ModelSpec spec = model_of(model);
    const std::vector<int> sizes = parse_sizes(sizes_text);
    if (n_seeds < 1) throw UsageError("--seeds must be >= 1");
    const Task task = task_of(data);
    SweepOptions options;
    options.n_seeds = n_seeds;
    ResultSet results;
    results.sweeps.push_back(size_sweep(spec, params_for(params_path, spec, task), task, sizes, options));
    if (out.empty() || out == "-") {
        write_output(out, results_to_json(results));
    } else {
        export_results(results, out, format_of_path(out));
    }
    for (const SweepRow& row : results.sweeps.front().rows)
        std::cerr << "N=" << row.n_reservoir << " " << to_string(task.score_kind()) << "="
                  << format_double(row.trimmed_score) << " failed=" << row.failed_count() << '\n';
    return exit_ok;
}

int run_profile(const DataOptions& data, const std::string& model, const std::string& params_path,
                const std::string& sizes_text, int n_seeds, const std::string& out) {
    const ModelSpec spec = model_of(model);
    const std::vector<int> sizes = parse_sizes(sizes_text);
    if (sizes.size() < 4) throw UsageError("profile needs at least 4 sizes");
    if (n_seeds < 1) throw UsageError("--seeds must be >= 1");
    const Task task = task_of(data);
    SweepOptions options;
    options.n_seeds = n_seeds;
    ResultSet results;
    results.sweeps.push_back(size_sweep(spec, params_for(params_path, spec, task), task, sizes, options));
    const auto [train, predict] = fit_sweep_complexity(results.sweeps.front());
    results.fits = {train, predict};
    write_output(out, results_to_json(results) + "\n");
    std::cerr << "train exponent " << format_double(train.exponent) << ", predict exponent "
              << format_double(predict.exponent) << '\n';
    return exit_ok;
}

// --- report ------------------------------------------------------------------

int run_report(const std::vector<std::string>& inputs, const std::string& format, const std::string& out) {
    ExportFormat f;
    try {
        f = parse_export_format(format);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    ResultSet all;
    for (const std::string& path : inputs) {
        ResultSet r = import_results(path);
        all.sweeps.insert(all.sweeps.end(), r.sweeps.begin(), r.sweeps.end());
        all.studies.insert(all.studies.end(), r.studies.begin(), r.studies.end());
        all.fits.insert(all.fits.end(), r.fits.begin(), r.fits.end());
    }
    write_output(out, report(all, f));
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Echo state network benchmarking: data generation, training, studies, sweeps and reports"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "esnlab 0.1.0");

    std::string out;
    std::optional<std::uint64_t> seed;

    // gen
    std::string gen_benchmark;
    auto* gen = app.add_subcommand("gen", "write a benchmark data set (CSV series or digit feature file)");
    gen->add_option("--benchmark", gen_benchmark, "narma10, figure8, mackey-glass or digits-synthetic")->required();
    gen->add_option("--seed", seed, "data seed (default: ESNLAB_SEED or 0)");
    gen->add_option("--out", out, "output path")->required();

    // train
    DataOptions train_data;
    std::string config_path;
    std::optional<double> beta;
    auto* train_cmd = app.add_subcommand("train", "build, train and score one seeded instantiation");
    train_cmd->add_option("--config", config_path, "JSON config with EsnConfig fields and optional ridge_beta")
        ->required()
        ->check(CLI::ExistingFile);
    add_data_options(train_cmd, train_data);
    train_cmd->add_option("--seed", seed, "root seed (default: ESNLAB_SEED or 0)");
    train_cmd->add_option("--beta", beta, "ridge coefficient, overriding the config");
    train_cmd->add_option("--out", out, "output JSON path (default: stdout)");

    // optimize
    DataOptions opt_data;
    std::string model;
    std::optional<int> trials;
    std::optional<int> n_reservoir;
    int opt_seeds = 10;
    int threads = 0;
    auto* optimize = app.add_subcommand("optimize", "run a seeded hyperparameter study");
    add_data_options(optimize, opt_data);
    optimize->add_option("--model", model, "model label, e.g. V2-FT-GI-DU")->required();
    optimize->add_option("--trials", trials, "trial budget (default: 150, or 50 for digits)");
    optimize->add_option("--study-seed", seed, "study seed (default: ESNLAB_SEED or 0)");
    optimize->add_option("--reservoir-size", n_reservoir, "neurons during the study (default: 100)");
    optimize->add_option("--seeds", opt_seeds, "instantiations per trial")->capture_default_str();
    optimize->add_option("--threads", threads, "worker threads, 0 = all cores")->capture_default_str();
    optimize->add_option("--out", out, "output JSON path (default: stdout)");

    // sweep
    DataOptions sweep_data;
    std::string params_path;
    std::string sizes = "50,150,250,350,450,550";
    int sweep_seeds = 15;
    auto* sweep = app.add_subcommand("sweep", "score a model over increasing reservoir sizes");
    add_data_options(sweep, sweep_data);
    sweep->add_option("--model", model, "model label")->required();
    sweep->add_option("--params", params_path, "tuned parameters or a study JSON (default: heuristic)")
        ->check(CLI::ExistingFile);
    sweep->add_option("--sizes", sizes, "comma separated, increasing")->capture_default_str();
    sweep->add_option("--seeds", sweep_seeds, "seeded instantiations per size")->capture_default_str();
    sweep->add_option("--out", out, "output path; .csv writes CSV, anything else JSON (default: stdout)");

    // profile
    DataOptions profile_data;
    std::string profile_sizes = "100,200,400,800,1600";
    int profile_seeds = 15;
    auto* profile = app.add_subcommand("profile", "fit train/predict runtime exponents over reservoir sizes");
    add_data_options(profile, profile_data);
    profile->add_option("--model", model, "model label")->required();
    profile->add_option("--params", params_path, "tuned parameters or a study JSON (default: heuristic)")
        ->check(CLI::ExistingFile);
    profile->add_option("--sizes", profile_sizes, "comma separated, at least 4")->capture_default_str();
    profile->add_option("--seeds", profile_seeds, "seeded instantiations per size")->capture_default_str();
    profile->add_option("--out", out, "output JSON path (default: stdout)");

    // report
    std::vector<std::string> inputs;
    std::string format = "csv";
    auto* report_cmd = app.add_subcommand("report", "plot-ready tables from exported results");
    report_cmd->add_option("--in", inputs, "result files (JSON or CSV); repeatable")
        ->required()
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--format", format, "csv or json")->capture_default_str();
    report_cmd->add_option("--out", out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (gen->parsed()) return run_gen(gen_benchmark, seed, out);
        if (train_cmd->parsed()) return run_train(config_path, train_data, seed, beta, out);
        if (optimize->parsed())
            return run_optimize(opt_data, model, trials, seed, n_reservoir, opt_seeds, threads, out);
        if (sweep->parsed()) return run_sweep(sweep_data, model, params_path, sizes, sweep_seeds, out);
        if (profile->parsed())
            return run_profile(profile_data, model, params_path, profile_sizes, profile_seeds, out);
        if (report_cmd->parsed()) return run_report(inputs, format, out);
    } catch (const UsageError& e) {
        std::cerr << "esnlab: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "esnlab: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}
