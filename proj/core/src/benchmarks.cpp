#include "esnlab/benchmarks.hpp"

#include "esnlab/errors.hpp"
#include "esnlab/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace esnlab {

std::string_view to_string(BenchmarkKind kind) {
    switch (kind) {
        case BenchmarkKind::narma10: return "narma10";
        case BenchmarkKind::figure8: return "figure8";
        case BenchmarkKind::mackey_glass: return "mackey-glass";
        case BenchmarkKind::digits: return "digits";
    }
    return "?";
}

BenchmarkKind parse_benchmark(std::string_view name) {
    if (name == "narma10" || name == "narma-10") return BenchmarkKind::narma10;
    if (name == "figure8" || name == "figure-8") return BenchmarkKind::figure8;
    if (name == "mackey-glass" || name == "mackey_glass") return BenchmarkKind::mackey_glass;
    if (name == "digits" || name == "digits-synthetic") return BenchmarkKind::digits;
    throw InvalidConfig("unknown benchmark '" + std::string(name) + "'");
}

std::vector<int> GroupedDataset::class_counts() const {
    std::vector<int> counts(static_cast<std::size_t>(std::max(n_classes, 0)), 0);
    for (const auto& g : groups) {
        if (g.label >= 0 && g.label < n_classes) ++counts[static_cast<std::size_t>(g.label)];
    }
    return counts;
}

BenchmarkProtocol protocol(BenchmarkKind kind) {
    BenchmarkProtocol p;
    p.kind = kind;
    switch (kind) {
        case BenchmarkKind::narma10:
            p.total_len = 3400;
            p.train_len = 1200;
            p.test_len = 2200;
            p.washout_train = 200;
            p.washout_test = 200;
            p.train_noise = 1e-4;
            p.n_inputs = 1;
            p.n_outputs = 1;
            p.study_reservoir_size = 100;
            p.study_trials = 150;
            break;
        case BenchmarkKind::figure8:
            p.total_len = 23000;
            p.train_len = 3000;
            p.test_len = 20000;
            p.washout_train = 1000;
            p.washout_test = 1000;
            p.predict_noise = 0.01;
            p.n_inputs = 0;
            p.n_outputs = 2;
            p.needs_feedback = true;
            p.study_reservoir_size = 20;
            p.study_trials = 150;
            break;
        case BenchmarkKind::mackey_glass:
            p.total_len = 4000;
            p.train_len = 2000;
            p.test_len = 2000;
            p.washout_train = 100;
            p.washout_test = 0;
            p.n_inputs = 0;
            p.n_outputs = 1;
            p.needs_feedback = true;
            // the study size is not stated for this benchmark; reuse the NARMA-10 size
            p.study_reservoir_size = 100;
            p.study_trials = 150;
            break;
        case BenchmarkKind::digits:
            p.n_inputs = 85;
            p.n_outputs = 5;
            p.study_reservoir_size = 50;
            p.study_trials = 50;
            p.train_fraction = 0.6;
            p.test_fraction = 0.2;
            break;
    }
    return p;
}

namespace {

// Proportional split used when a generator is asked for a non-default length.
void assign_split(SequenceDataset& d, int train_len, int washout_train, int washout_test) {
    d.train_len = train_len;
    d.test_len = d.total_len() - train_len;
    d.washout_train = std::min(washout_train, d.train_len / 2);
    d.washout_test = std::min(washout_test, d.test_len / 2);
}

}  // namespace

std::vector<double> narma10_response(const std::vector<double>& m) {
    const std::size_t n = m.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t k = 9; k + 1 < n; ++k) {
        double window = 0.0;
        for (std::size_t i = 0; i < 10; ++i) window += d[k - i];
        d[k + 1] = 0.3 * d[k] + 0.05 * d[k] * window + 1.5 * m[k - 9] * m[k] + 0.1;
    }
    return d;
}

namespace {
constexpr int max_narma_attempts = 1000;
}

SequenceDataset gen_narma10(int total_len, std::uint64_t seed) {
    if (total_len < 20) throw LengthTooShort("NARMA-10 needs at least 20 samples");
    const auto n = static_cast<std::size_t>(total_len);

    std::uint64_t used = seed;
    std::vector<double> m(n);
    std::vector<double> d;
    for (int attempt = 0;; ++attempt, ++used) {
        if (attempt == max_narma_attempts)
            throw NonFiniteState("NARMA-10 diverged for every regenerated input sequence");
        Rng rng(used);
        std::uniform_real_distribution<double> dist(0.0, 0.5);
        for (double& v : m) v = dist(rng);
        d = narma10_response(m);
        const bool bounded = std::all_of(d.begin(), d.end(), [](double v) {
            return std::isfinite(v) && std::abs(v) <= narma_divergence_bound;
        });
        if (bounded) break;
    }

    SequenceDataset ds;
    ds.benchmark_name = "narma10";
    ds.generator_seed = used;
    ds.inputs = Eigen::Map<const Eigen::RowVectorXd>(m.data(), total_len);
    ds.targets = Eigen::Map<const Eigen::RowVectorXd>(d.data(), total_len);
    if (total_len == 3400) {
        assign_split(ds, 1200, 200, 200);
    } else {
        assign_split(ds, total_len * 6 / 17, 200, 200);
    }
    return ds;
}

SequenceDataset gen_figure8(int total_len) {
    if (total_len < 200) throw LengthTooShort("figure-8 needs at least 200 samples");
    SequenceDataset ds;
    ds.benchmark_name = "figure8";
    ds.inputs = Eigen::MatrixXd(0, total_len);
    ds.targets = Eigen::MatrixXd(2, total_len);
    for (int k = 0; k < total_len; ++k) {
        // reduce k modulo the 200-sample period so the phase is exact for any k
        const double t = static_cast<double>(k % 200) / 100.0;
        ds.targets(0, k) = std::sin(2.0 * std::numbers::pi * t);
        ds.targets(1, k) = std::cos(std::numbers::pi * t);
    }
    if (total_len == 23000) {
        assign_split(ds, 3000, 1000, 1000);
    } else {
        assign_split(ds, total_len * 3 / 23, 1000, 1000);
    }
    return ds;
}

const std::vector<double>& mackey_glass_history() {
    static const std::vector<double> history{
        0.9697, 0.9699, 0.9794, 1.0003, 1.0319, 1.0703, 1.1076, 1.1352, 1.1485,
        1.1482, 1.1383, 1.1234, 1.1072, 1.0928, 1.0820, 1.0756, 1.0739, 1.0759,
    };
    return history;
}

std::vector<double> mackey_glass_series(int n, int tau) {
    if (tau < 1) throw InvalidConfig("Mackey-Glass delay must be >= 1");
    const auto& history = mackey_glass_history();
    if (tau + 1 > static_cast<int>(history.size()))
        throw InvalidConfig("Mackey-Glass delay exceeds the stored history");
    std::vector<double> y(static_cast<std::size_t>(std::max(n, 0)));
    const int seeded = std::min<int>(n, static_cast<int>(history.size()));
    std::copy_n(history.begin(), seeded, y.begin());
    for (int t = seeded; t < n; ++t) {
        const double cur = y[static_cast<std::size_t>(t - 1)];
        const double lag = y[static_cast<std::size_t>(t - 1 - tau)];
        y[static_cast<std::size_t>(t)] = cur + 0.2 * lag / (1.0 + std::pow(lag, 10)) - 0.1 * cur;
    }
    return y;
}

SequenceDataset gen_mackey_glass(int total_len, int tau, int drop) {
    if (total_len < 4) throw LengthTooShort("Mackey-Glass needs at least 4 retained samples");
    if (drop < 0) throw InvalidConfig("drop must be >= 0");
    const std::vector<double> y = mackey_glass_series(total_len + drop, tau);

    SequenceDataset ds;
    ds.benchmark_name = "mackey-glass";
    ds.inputs = Eigen::MatrixXd(0, total_len);
    ds.targets = Eigen::Map<const Eigen::RowVectorXd>(y.data() + drop, total_len);
    assign_split(ds, total_len / 2, 100, 0);
    return ds;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                 : comma - start);
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r'))
            f.remove_suffix(1);
        fields.push_back(f);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

GroupedDataset load_digit_features(const std::filesystem::path& path, int n_channels) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open feature file " + path.string());

    GroupedDataset ds;
    ds.n_channels = n_channels;
    ds.n_classes = 5;

    std::vector<std::vector<double>> columns;  // samples of the group being assembled
    long current_id = 0;
    int current_label = -1;
    bool have_group = false;

    auto flush = [&] {
        if (!have_group) return;
        if (current_label <= 4) {
            Group g;
            g.group_id = current_id;
            g.label = current_label;
            g.features.resize(n_channels, static_cast<Eigen::Index>(columns.size()));
            for (std::size_t c = 0; c < columns.size(); ++c) {
                for (int r = 0; r < n_channels; ++r)
                    g.features(r, static_cast<Eigen::Index>(c)) = columns[c][static_cast<std::size_t>(r)];
            }
            ds.groups.push_back(std::move(g));
        }
        columns.clear();
        have_group = false;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_fields(line);
        long id = 0;
        if (line_no == 1 && !parse_number(fields.front(), id)) continue;  // header row
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (static_cast<int>(fields.size()) != n_channels + 2) {
            throw MalformedRecord(where + ": expected " + std::to_string(n_channels + 2) +
                                  " columns, found " + std::to_string(fields.size()));
        }
        int label = 0;
        if (!parse_number(fields[0], id) || !parse_number(fields[1], label))
            throw MalformedRecord(where + ": group id and label must be integers");
        if (label < 0 || label > 9) throw UnknownLabel(where + ": label " + std::to_string(label));
        std::vector<double> sample(static_cast<std::size_t>(n_channels));
        for (int c = 0; c < n_channels; ++c) {
            if (!parse_number(fields[static_cast<std::size_t>(c) + 2], sample[static_cast<std::size_t>(c)]))
                throw MalformedRecord(where + ": feature " + std::to_string(c) + " is not a number");
        }
        if (!have_group || id != current_id) {
            flush();
            current_id = id;
            current_label = label;
            have_group = true;
        } else if (label != current_label) {
            throw MalformedRecord(where + ": label changes inside group " + std::to_string(id));
        }
        columns.push_back(std::move(sample));
    }
    flush();
    return ds;
}

void export_digit_features(const GroupedDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write feature file " + path.string());
    out << "group_id,label";
    for (int c = 0; c < dataset.n_channels; ++c) out << ",f_" << c + 1;
    out << '\n';
    char buf[64];
    for (const auto& g : dataset.groups) {
        for (Eigen::Index t = 0; t < g.features.cols(); ++t) {
            out << g.group_id << ',' << g.label;
            for (Eigen::Index r = 0; r < g.features.rows(); ++r) {
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, g.features(r, t));
                out << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
            }
            out << '\n';
        }
    }
    if (!out) throw IoFailure("write failed for " + path.string());
}

GroupedDataset gen_synthetic_digits(int n_classes, int n_channels, int groups_per_class,
                                    int samples_per_group, double class_separation,
                                    std::uint64_t seed) {
    if (n_classes < 1 || n_channels < 1 || groups_per_class < 1 || samples_per_group < 1)
        throw InvalidConfig("synthetic digit counts must all be >= 1");
    if (!(class_separation >= 0.0)) throw InvalidConfig("class_separation must be >= 0");

    Rng template_rng(derive_seed(seed, 0));
    Rng noise_rng(derive_seed(seed, 1));
    std::normal_distribution<double> normal(0.0, 1.0);

    // One shared direction pattern per class; with zero separation every template is zero.
    std::vector<Eigen::VectorXd> templates;
    for (int c = 0; c < n_classes; ++c) {
        Eigen::VectorXd t(n_channels);
        for (auto& v : t) v = normal(template_rng);
        templates.push_back(class_separation * t);
    }

    GroupedDataset ds;
    ds.n_classes = n_classes;
    ds.n_channels = n_channels;
    long id = 0;
    for (int k = 0; k < groups_per_class; ++k) {
        for (int c = 0; c < n_classes; ++c) {
            Group g;
            g.group_id = id++;
            g.label = c;
            g.features.resize(n_channels, samples_per_group);
            for (int s = 0; s < samples_per_group; ++s) {
                for (int r = 0; r < n_channels; ++r)
                    g.features(r, s) = templates[static_cast<std::size_t>(c)][r] + normal(noise_rng);
            }
            ds.groups.push_back(std::move(g));
        }
    }
    return ds;
}

std::pair<GroupedDataset, GroupedDataset> split_grouped(const GroupedDataset& dataset,
                                                        double train_frac, double test_frac,
                                                        std::uint64_t seed) {
    if (!(train_frac >= 0.0) || !(test_frac >= 0.0) || train_frac + test_frac > 1.0 + 1e-12)
        throw InvalidFractions("fractions must be non-negative and sum to at most 1");
    const std::size_t total = dataset.groups.size();
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n_train = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(total) + 1e-9));
    const auto n_test = std::min(total - n_train,
                                 static_cast<std::size_t>(std::floor(test_frac * static_cast<double>(total) + 1e-9)));

    GroupedDataset train;
    GroupedDataset test;
    train.n_classes = test.n_classes = dataset.n_classes;
    train.n_channels = test.n_channels = dataset.n_channels;
    for (std::size_t i = 0; i < n_train; ++i) train.groups.push_back(dataset.groups[order[i]]);
    for (std::size_t i = n_train; i < n_train + n_test; ++i) test.groups.push_back(dataset.groups[order[i]]);
    return {std::move(train), std::move(test)};
}

}  // namespace esnlab
