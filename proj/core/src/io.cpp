#include "esnlab/io.hpp"

#include "esnlab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace esnlab {

using nlohmann::json;

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, static_cast<std::size_t>(ptr - buf)};
}

double parse_double(std::string_view text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw MalformedRecord("not a number: '" + std::string(text) + "'");
    return value;
}

namespace {

json number(double v) { return format_double(v); }

double as_double(const json& j) {
    if (j.is_string()) return parse_double(j.get<std::string>());
    if (j.is_number()) return j.get<double>();
    throw MalformedRecord("expected a number or a decimal string");
}

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

std::vector<double> as_doubles(const json& j) {
    std::vector<double> v;
    for (const auto& e : j) v.push_back(as_double(e));
    return v;
}

const json& field(const json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end()) throw MalformedRecord(std::string("missing field '") + name + "'");
    return *it;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw MalformedRecord(std::string("invalid JSON: ") + e.what());
    }
}

// --- params -------------------------------------------------------------

json params_json(const TunedParams& p) {
    return {{"spectral_radius", number(p.spectral_radius)},
            {"leak_rate", number(p.leak_rate)},
            {"reservoir_density", number(p.reservoir_density)},
            {"input_density", number(p.input_density)},
            {"feedback_density", number(p.feedback_density)},
            {"input_scale", number(p.input_scale)},
            {"feedback_scale", number(p.feedback_scale)},
            {"ridge_beta", number(p.ridge_beta)}};
}

TunedParams params_of(const json& j) {
    TunedParams p;
    p.spectral_radius = as_double(field(j, "spectral_radius"));
    p.leak_rate = as_double(field(j, "leak_rate"));
    p.reservoir_density = as_double(field(j, "reservoir_density"));
    p.input_density = as_double(field(j, "input_density"));
    p.feedback_density = as_double(field(j, "feedback_density"));
    p.input_scale = as_double(field(j, "input_scale"));
    p.feedback_scale = as_double(field(j, "feedback_scale"));
    p.ridge_beta = as_double(field(j, "ridge_beta"));
    return p;
}

// --- study --------------------------------------------------------------

json study_json(const StudyRecord& s) {
    json trials = json::array();
    for (const TrialRecord& t : s.trials) {
        trials.push_back({{"trial_index", t.trial_index},
                          {"params", params_json(t.params)},
                          {"per_seed_scores", numbers(t.per_seed_scores)},
                          {"best_score", number(t.best_score)},
                          {"failed", t.failed}});
    }
    return {{"study_label", s.study_label},
            {"benchmark", s.benchmark},
            {"model_label", s.model_label},
            {"n_reservoir", s.n_reservoir},
            {"score_name", std::string(to_string(s.score_kind))},
            {"study_seed", s.study_seed},
            {"best_trial_index", s.best_trial_index},
            {"trials", trials}};
}

StudyRecord study_of(const json& j) {
    StudyRecord s;
    s.study_label = field(j, "study_label").get<std::string>();
    s.benchmark = field(j, "benchmark").get<std::string>();
    s.model_label = field(j, "model_label").get<std::string>();
    s.n_reservoir = field(j, "n_reservoir").get<int>();
    s.score_kind = parse_score_kind(field(j, "score_name").get<std::string>());
    s.study_seed = field(j, "study_seed").get<std::uint64_t>();
    s.best_trial_index = field(j, "best_trial_index").get<int>();
    for (const auto& t : field(j, "trials")) {
        TrialRecord r;
        r.trial_index = field(t, "trial_index").get<int>();
        r.params = params_of(field(t, "params"));
        r.per_seed_scores = as_doubles(field(t, "per_seed_scores"));
        r.best_score = as_double(field(t, "best_score"));
        r.failed = field(t, "failed").get<bool>();
        s.trials.push_back(std::move(r));
    }
    return s;
}

// --- sweep --------------------------------------------------------------

json sweep_json(const SweepRecord& s) {
    json rows = json::array();
    for (const SweepRow& r : s.rows) {
        rows.push_back({{"N", r.n_reservoir},
                        {"seeds", r.seeds},
                        {"scores", numbers(r.scores)},
                        {"train_ms", numbers(r.train_ms)},
                        {"predict_ms", numbers(r.predict_ms)},
                        {"trimmed_score", number(r.trimmed_score)},
                        {"trimmed_train_ms", number(r.trimmed_train_ms)},
                        {"trimmed_predict_ms", number(r.trimmed_predict_ms)},
                        {"failed_seeds", r.failed_count()}});
    }
    return {{"model_label", s.model_label},
            {"benchmark", s.benchmark},
            {"score_name", std::string(to_string(s.score_kind))},
            {"rows", rows}};
}

SweepRecord sweep_of(const json& j) {
    SweepRecord s;
    s.model_label = field(j, "model_label").get<std::string>();
    s.benchmark = field(j, "benchmark").get<std::string>();
    s.score_kind = parse_score_kind(field(j, "score_name").get<std::string>());
    for (const auto& r : field(j, "rows")) {
        SweepRow row;
        row.n_reservoir = field(r, "N").get<int>();
        row.seeds = field(r, "seeds").get<std::vector<std::uint64_t>>();
        row.scores = as_doubles(field(r, "scores"));
        row.train_ms = as_doubles(field(r, "train_ms"));
        row.predict_ms = as_doubles(field(r, "predict_ms"));
        row.trimmed_score = as_double(field(r, "trimmed_score"));
        row.trimmed_train_ms = as_double(field(r, "trimmed_train_ms"));
        row.trimmed_predict_ms = as_double(field(r, "trimmed_predict_ms"));
        if (row.seeds.size() != row.scores.size() || row.scores.size() != row.train_ms.size() ||
            row.scores.size() != row.predict_ms.size())
            throw MalformedRecord("sweep row vectors differ in length");
        s.rows.push_back(std::move(row));
    }
    return s;
}

// --- complexity ---------------------------------------------------------

json fit_json(const ComplexityFit& f) {
    return {{"phase", f.phase == Phase::train ? "train" : "predict"},
            {"exponent", number(f.exponent)},
            {"intercept", number(f.intercept)},
            {"residual", number(f.residual)},
            {"sizes", f.sizes}};
}

ComplexityFit fit_of(const json& j) {
    ComplexityFit f;
    const auto phase = field(j, "phase").get<std::string>();
    if (phase != "train" && phase != "predict") throw MalformedRecord("unknown phase " + phase);
    f.phase = phase == "train" ? Phase::train : Phase::predict;
    f.exponent = as_double(field(j, "exponent"));
    f.intercept = as_double(field(j, "intercept"));
    f.residual = as_double(field(j, "residual"));
    f.sizes = field(j, "sizes").get<std::vector<int>>();
    return f;
}

void collect(const json& j, ResultSet& out) {
    if (j.is_array()) {
        for (const auto& e : j) collect(e, out);
    } else if (!j.is_object()) {
        throw MalformedRecord("expected a JSON object or array");
    } else if (j.contains("trials")) {
        out.studies.push_back(study_of(j));
    } else if (j.contains("rows")) {
        out.sweeps.push_back(sweep_of(j));
    } else if (j.contains("exponent")) {
        out.fits.push_back(fit_of(j));
    } else if (j.contains("sweeps") || j.contains("studies") || j.contains("complexity")) {
        for (const char* key : {"sweeps", "studies", "complexity"}) {
            if (j.contains(key)) collect(j.at(key), out);
        }
    } else {
        throw MalformedRecord("unrecognized result document");
    }
}

}  // namespace

std::string config_to_json(const EsnConfig& c, std::optional<double> ridge_beta) {
    json j = {{"n_inputs", c.n_inputs},
              {"n_reservoir", c.n_reservoir},
              {"n_outputs", c.n_outputs},
              {"spectral_radius", c.spectral_radius},
              {"leak_rate", c.leak_rate},
              {"reservoir_density", c.reservoir_density},
              {"input_density", c.input_density},
              {"feedback_density", c.feedback_density},
              {"input_scale", c.input_scale},
              {"feedback_scale", c.feedback_scale},
              {"noise_scale", c.noise_scale},
              {"reservoir_activation", std::string(to_string(c.reservoir_activation))},
              {"output_activation", std::string(to_string(c.output_activation))},
              {"readout_variant", std::string(to_string(c.readout_variant))},
              {"weight_distribution", std::string(to_string(c.weight_distribution))},
              {"bias_enabled", c.bias_enabled},
              {"classifier_mode", c.classifier_mode}};
    if (ridge_beta) j["ridge_beta"] = *ridge_beta;
    return j.dump(2);
}

ConfigFile config_from_json(std::string_view text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw MalformedRecord("config must be a JSON object");
    ConfigFile out;
    EsnConfig& c = out.config;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "n_inputs") c.n_inputs = value.get<int>();
            else if (key == "n_reservoir") c.n_reservoir = value.get<int>();
            else if (key == "n_outputs") c.n_outputs = value.get<int>();
            else if (key == "spectral_radius") c.spectral_radius = as_double(value);
            else if (key == "leak_rate") c.leak_rate = as_double(value);
            else if (key == "reservoir_density") c.reservoir_density = as_double(value);
            else if (key == "input_density") c.input_density = as_double(value);
            else if (key == "feedback_density") c.feedback_density = as_double(value);
            else if (key == "input_scale") c.input_scale = as_double(value);
            else if (key == "feedback_scale") c.feedback_scale = as_double(value);
            else if (key == "noise_scale") c.noise_scale = as_double(value);
            else if (key == "reservoir_activation") c.reservoir_activation = parse_activation(value.get<std::string>());
            else if (key == "output_activation") c.output_activation = parse_activation(value.get<std::string>());
            else if (key == "readout_variant") c.readout_variant = parse_readout_variant(value.get<std::string>());
            else if (key == "weight_distribution") c.weight_distribution = parse_weight_distribution(value.get<std::string>());
            else if (key == "bias_enabled") c.bias_enabled = value.get<bool>();
            else if (key == "classifier_mode") c.classifier_mode = value.get<bool>();
            else if (key == "ridge_beta") out.ridge_beta = as_double(value);
            else throw MalformedRecord("unknown config field '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw MalformedRecord(std::string("bad config value: ") + e.what());
    }
    return out;
}

std::string params_to_json(const TunedParams& params) { return params_json(params).dump(2); }

TunedParams params_from_json(std::string_view text) {
    const json j = parse_json(text);
    try {
        if (j.is_object() && j.contains("trials")) return study_of(j).best_trial().params;
        return params_of(j);
    } catch (const json::exception& e) {
        throw MalformedRecord(std::string("bad parameter document: ") + e.what());
    } catch (const std::out_of_range&) {
        throw MalformedRecord("study record has no trials");
    }
}

ExportFormat parse_export_format(std::string_view s) {
    if (s == "csv") return ExportFormat::csv;
    if (s == "json") return ExportFormat::json;
    throw InvalidConfig("unknown format '" + std::string(s) + "' (csv or json)");
}

std::string study_to_json(const StudyRecord& study) { return study_json(study).dump(2); }

StudyRecord study_from_json(std::string_view text) {
    try {
        return study_of(parse_json(text));
    } catch (const json::exception& e) {
        throw MalformedRecord(std::string("bad study record: ") + e.what());
    }
}

std::string results_to_json(const ResultSet& results) {
    if (results.studies.size() == 1 && results.sweeps.empty() && results.fits.empty())
        return study_to_json(results.studies.front());
    json sweeps = json::array();
    for (const auto& s : results.sweeps) sweeps.push_back(sweep_json(s));
    json studies = json::array();
    for (const auto& s : results.studies) studies.push_back(study_json(s));
    json fits = json::array();
    for (const auto& f : results.fits) fits.push_back(fit_json(f));
    return json{{"sweeps", sweeps}, {"studies", studies}, {"complexity", fits}}.dump(2);
}

ResultSet results_from_json(std::string_view text) {
    ResultSet out;
    try {
        collect(parse_json(text), out);
    } catch (const json::exception& e) {
        throw MalformedRecord(std::string("bad result document: ") + e.what());
    }
    return out;
}

namespace {

constexpr std::string_view csv_header =
    "model_label,benchmark,N,seed,score_name,score,train_ms,predict_ms";

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_integer(std::string_view s) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw MalformedRecord("not an integer: '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string sweeps_to_csv(std::span<const SweepRecord> sweeps) {
    std::ostringstream out;
    out << csv_header << '\n';
    for (const SweepRecord& s : sweeps) {
        if (s.model_label.find(',') != std::string::npos || s.benchmark.find(',') != std::string::npos)
            throw InvalidConfig("labels must not contain commas");
        for (const SweepRow& r : s.rows) {
            for (std::size_t i = 0; i < r.scores.size(); ++i) {
                out << s.model_label << ',' << s.benchmark << ',' << r.n_reservoir << ','
                    << r.seeds[i] << ',' << to_string(s.score_kind) << ','
                    << format_double(r.scores[i]) << ',' << format_double(r.train_ms[i]) << ','
                    << format_double(r.predict_ms[i]) << '\n';
            }
        }
    }
    return out.str();
}

std::vector<SweepRecord> sweeps_from_csv(std::string_view text) {
    std::vector<SweepRecord> out;
    std::size_t pos = 0;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != csv_header) throw MalformedRecord("unexpected CSV header");
            header_seen = true;
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 8)
            throw MalformedRecord("CSV line " + std::to_string(line_no) + ": expected 8 columns");
        const std::string model(f[0]);
        const std::string bench(f[1]);
        const ScoreKind kind = parse_score_kind(f[4]);
        if (out.empty() || out.back().model_label != model || out.back().benchmark != bench ||
            out.back().score_kind != kind) {
            out.push_back({model, bench, kind, {}});
        }
        SweepRecord& rec = out.back();
        const int n = parse_integer<int>(f[2]);
        if (rec.rows.empty() || rec.rows.back().n_reservoir != n) {
            rec.rows.emplace_back();
            rec.rows.back().n_reservoir = n;
        }
        SweepRow& row = rec.rows.back();
        row.seeds.push_back(parse_integer<std::uint64_t>(f[3]));
        row.scores.push_back(parse_double(f[5]));
        row.train_ms.push_back(parse_double(f[6]));
        row.predict_ms.push_back(parse_double(f[7]));
    }
    for (auto& rec : out) {
        for (auto& row : rec.rows) aggregate(row);
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoFailure("write failed for " + path.string());
}

void export_results(const ResultSet& results, const std::filesystem::path& path, ExportFormat format) {
    if (format == ExportFormat::csv) {
        if (!results.studies.empty() || !results.fits.empty())
            throw InvalidConfig("CSV export holds sweep records only; use JSON");
        write_text_file(path, sweeps_to_csv(results.sweeps));
    } else {
        write_text_file(path, results_to_json(results) + "\n");
    }
}

ResultSet import_results(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return results_from_json(text);
    ResultSet out;
    out.sweeps = sweeps_from_csv(text);
    return out;
}

namespace {

struct SizeLine {
    std::string model;
    std::string benchmark;
    std::string score_name;
    int n = 0;
    double score = 0.0;
    double train_ms = 0.0;
    double predict_ms = 0.0;
    int valid = 0;
};

struct RankLine {
    std::string model;
    std::string benchmark;
    std::string score_name;
    double value = 0.0;
};

// Positive improvement means the score got better from the smallest to the largest size.
std::pair<std::vector<RankLine>, std::vector<RankLine>> rankings(const ResultSet& results) {
    std::vector<RankLine> final_score;
    std::vector<RankLine> improvement;
    for (const SweepRecord& s : results.sweeps) {
        if (s.rows.empty()) continue;
        const std::string name(to_string(s.score_kind));
        const double first = s.rows.front().trimmed_score;
        const double last = s.rows.back().trimmed_score;
        final_score.push_back({s.model_label, s.benchmark, name, last});
        improvement.push_back({s.model_label, s.benchmark, name,
                               lower_is_better(s.score_kind) ? first - last : last - first});
    }
    auto nan_last = [](double v, double fill) { return std::isnan(v) ? fill : v; };
    std::stable_sort(final_score.begin(), final_score.end(), [&](const RankLine& a, const RankLine& b) {
        const bool lower = a.score_name == "rmse";
        const double fill = lower ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        return lower ? nan_last(a.value, fill) < nan_last(b.value, fill)
                     : nan_last(a.value, fill) > nan_last(b.value, fill);
    });
    std::stable_sort(improvement.begin(), improvement.end(), [&](const RankLine& a, const RankLine& b) {
        const double fill = -std::numeric_limits<double>::infinity();
        return nan_last(a.value, fill) > nan_last(b.value, fill);
    });
    return {final_score, improvement};
}

}  // namespace

std::string report(const ResultSet& results, ExportFormat format) {
    std::vector<SizeLine> sizes;
    for (const SweepRecord& s : results.sweeps) {
        for (const SweepRow& r : s.rows) {
            sizes.push_back({s.model_label, s.benchmark, std::string(to_string(s.score_kind)),
                             r.n_reservoir, r.trimmed_score, r.trimmed_train_ms,
                             r.trimmed_predict_ms, static_cast<int>(r.scores.size()) - r.failed_count()});
        }
    }
    const auto [by_final, by_improvement] = rankings(results);

    if (format == ExportFormat::json) {
        json size_table = json::array();
        for (const auto& l : sizes) {
            size_table.push_back({{"model_label", l.model}, {"benchmark", l.benchmark},
                                  {"score_name", l.score_name}, {"N", l.n},
                                  {"trimmed_score", number(l.score)},
                                  {"trimmed_train_ms", number(l.train_ms)},
                                  {"trimmed_predict_ms", number(l.predict_ms)},
                                  {"valid_seeds", l.valid}});
        }
        auto rank_json = [](const std::vector<RankLine>& lines, const char* value_name) {
            json a = json::array();
            int rank = 1;
            for (const auto& l : lines) {
                a.push_back({{"rank", rank++}, {"model_label", l.model}, {"benchmark", l.benchmark},
                             {"score_name", l.score_name}, {value_name, number(l.value)}});
            }
            return a;
        };
        json studies = json::array();
        for (const StudyRecord& s : results.studies) {
            studies.push_back({{"study_label", s.study_label}, {"model_label", s.model_label},
                               {"benchmark", s.benchmark}, {"score_name", std::string(to_string(s.score_kind))},
                               {"best_trial_index", s.best_trial_index},
                               {"best_score", s.trials.empty() ? number(std::nan("")) : number(s.best_trial().best_score)}});
        }
        json fits = json::array();
        for (const auto& f : results.fits) fits.push_back(fit_json(f));
        return json{{"size_table", size_table},
                    {"rank_by_final_score", rank_json(by_final, "final_score")},
                    {"rank_by_improvement", rank_json(by_improvement, "improvement")},
                    {"studies", studies},
                    {"complexity", fits}}
                   .dump(2) + "\n";
    }

    std::ostringstream out;
    out << "model_label,benchmark,score_name,N,trimmed_score,trimmed_train_ms,trimmed_predict_ms,valid_seeds\n";
    for (const auto& l : sizes) {
        out << l.model << ',' << l.benchmark << ',' << l.score_name << ',' << l.n << ','
            << format_double(l.score) << ',' << format_double(l.train_ms) << ','
            << format_double(l.predict_ms) << ',' << l.valid << '\n';
    }
    auto rank_csv = [&](const std::vector<RankLine>& lines, const char* value_name) {
        out << "\nrank,model_label,benchmark,score_name," << value_name << '\n';
        int rank = 1;
        for (const auto& l : lines) {
            out << rank++ << ',' << l.model << ',' << l.benchmark << ',' << l.score_name << ','
                << format_double(l.value) << '\n';
        }
    };
    if (!by_final.empty()) {
        rank_csv(by_final, "final_score");
        rank_csv(by_improvement, "improvement");
    }
    if (!results.studies.empty()) {
        out << "\nstudy_label,model_label,benchmark,score_name,best_trial_index,best_score\n";
        for (const StudyRecord& s : results.studies) {
            out << s.study_label << ',' << s.model_label << ',' << s.benchmark << ','
                << to_string(s.score_kind) << ',' << s.best_trial_index << ','
                << format_double(s.trials.empty() ? std::nan("") : s.best_trial().best_score) << '\n';
        }
    }
    if (!results.fits.empty()) {
        out << "\nphase,exponent,intercept,residual,sizes\n";
        for (const auto& f : results.fits) {
            out << (f.phase == Phase::train ? "train" : "predict") << ',' << format_double(f.exponent)
                << ',' << format_double(f.intercept) << ',' << format_double(f.residual) << ',';
            for (std::size_t i = 0; i < f.sizes.size(); ++i) out << (i ? ";" : "") << f.sizes[i];
            out << '\n';
        }
    }
    return out.str();
}

}  // namespace esnlab
