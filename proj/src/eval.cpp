#include "rmod/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmod/errors.hpp"
#include "rmod/parallel.hpp"
#include "rmod/text.hpp"

namespace rmod {

namespace {

std::size_t outcome_index(Outcome o) { return static_cast<std::size_t>(o); }

nlohmann::json ranges_to_json(const RangeSummary& summary) {
    nlohmann::json j;
    for (std::size_t i = 0; i < 3; ++i) {
        const ClassStats& s = summary.per_class[i];
        j[to_string(kModulationClasses[i])] = {
            {"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"median", s.median}};
    }
    return j;
}

nlohmann::json timing_to_json(const BenchEntry& t) {
    nlohmann::json j{{"total_wall_s", t.total_wall_s},
                     {"per_signal_mean_s", t.per_signal_mean_s},
                     {"signal_count", t.signal_count}};
    if (t.peak_rss_kib) {
        j["peak_rss_kib"] = *t.peak_rss_kib;
        j["rss_method"] = t.rss_method;
    }
    return j;
}

} // namespace

void ConfusionMatrix::add(ModulationClass truth, Outcome decision, std::uint64_t count) {
    counts_[class_ordinal(truth)][outcome_index(decision)] += count;
}

std::uint64_t ConfusionMatrix::at(ModulationClass truth, Outcome decision) const {
    return counts_[class_ordinal(truth)][outcome_index(decision)];
}

std::uint64_t ConfusionMatrix::row_sum(ModulationClass truth) const {
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts_[class_ordinal(truth)]) sum += c;
    return sum;
}

std::uint64_t ConfusionMatrix::grand_total() const {
    std::uint64_t sum = 0;
    for (ModulationClass cls : kModulationClasses) sum += row_sum(cls);
    return sum;
}

std::uint64_t ConfusionMatrix::diagonal_total() const {
    std::uint64_t sum = 0;
    for (ModulationClass cls : kModulationClasses) sum += at(cls, outcome_of(cls));
    return sum;
}

double class_accuracy(const ConfusionMatrix& cm, ModulationClass cls) {
    const std::uint64_t total = cm.row_sum(cls);
    if (total == 0)
        throw ValidationError(std::string("accuracy: empty row for class ") + to_string(cls));
    return 100.0 * static_cast<double>(cm.at(cls, outcome_of(cls))) /
           static_cast<double>(total);
}

double overall_accuracy(const ConfusionMatrix& cm) {
    const std::uint64_t total = cm.grand_total();
    if (total == 0) throw ValidationError("accuracy: empty confusion matrix");
    return 100.0 * static_cast<double>(cm.diagonal_total()) / static_cast<double>(total);
}

RangeSummary summarize_ranges(const std::array<std::vector<double>, 3>& r_values_per_class,
                              RMethod method) {
    RangeSummary summary;
    summary.method = method;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<double> values = r_values_per_class[i];
        if (values.size() < 2)
            throw ValidationError(std::string("summarize_ranges: class ") +
                                  to_string(kModulationClasses[i]) +
                                  " needs at least 2 values");
        std::sort(values.begin(), values.end());
        ClassStats s;
        s.min = values.front();
        s.max = values.back();
        s.mean = mean(values);
        const std::size_t n = values.size();
        s.median = (n % 2 == 1) ? values[n / 2]
                                : 0.5 * (values[n / 2 - 1] + values[n / 2]);
        summary.per_class[i] = s;
    }
    return summary;
}

std::vector<RValue> batch_r_values(const std::vector<SignalRecord>& records, RMethod method,
                                   const StftConfig& stft_cfg, unsigned threads) {
    std::vector<RValue> out(records.size());
    parallel_for(records.size(), threads,
                 [&](std::size_t i) { out[i] = r_pipeline(records[i], method, stft_cfg); });
    return out;
}

ExperimentResult run_experiment(const DatasetSpec& train_spec, const DatasetSpec& test_spec,
                                RMethod method, const StftConfig& stft_cfg, double margin,
                                unsigned threads) {
    train_spec.config.validate();
    test_spec.config.validate();
    if (train_spec.master_seed == test_spec.master_seed)
        throw ValidationError("run_experiment: train and test master seeds must differ");

    ExperimentResult result;
    result.method = method;
    result.margin = margin;
    result.stft_cfg = stft_cfg;

    // calibration phase (not timed)
    const std::vector<SignalRecord> train = generate_dataset(train_spec, threads);
    const std::vector<RValue> train_r = batch_r_values(train, method, stft_cfg, threads);
    std::array<std::vector<double>, 3> train_by_class;
    for (std::size_t i = 0; i < train.size(); ++i)
        train_by_class[class_ordinal(train[i].label)].push_back(train_r[i].value);
    result.train_ranges = summarize_ranges(train_by_class, method);
    const ThresholdProfile profile = calibrate(
        train_by_class, method, margin, config_digest(train_spec.config, method, stft_cfg));
    result.profile = profile;

    const std::vector<SignalRecord> test = generate_dataset(test_spec, threads);

    // timed stage: envelope + R + decision
    std::vector<Decision> decisions(test.size());
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(test.size(), threads, [&](std::size_t i) {
        decisions[i] = classify_record(test[i], profile, stft_cfg);
    });
    const auto t1 = std::chrono::steady_clock::now();

    std::array<std::vector<double>, 3> test_by_class;
    for (std::size_t i = 0; i < test.size(); ++i) {
        result.confusion.add(test[i].label, decisions[i].outcome);
        test_by_class[class_ordinal(test[i].label)].push_back(decisions[i].r.value);
    }
    result.test_ranges = summarize_ranges(test_by_class, method);

    result.timing.total_wall_s = std::chrono::duration<double>(t1 - t0).count();
    result.timing.signal_count = test.size();
    result.timing.per_signal_mean_s =
        result.timing.total_wall_s / static_cast<double>(test.size());
    result.timing.peak_rss_kib = peak_rss_kib();
    return result;
}

std::string report_to_json(const ExperimentResult& result) {
    nlohmann::json j;
    j["format"] = "rmod-report";
    j["version"] = 1;
    j["method"] = to_string(result.method);
    j["margin"] = result.margin;
    j["stft_config"] = {{"window_len", result.stft_cfg.window_len},
                        {"hop", result.stft_cfg.hop},
                        {"window", to_string(result.stft_cfg.window_fn)}};

    nlohmann::json confusion;
    confusion["rows"] = {"AM", "DSB", "SSB"};
    confusion["cols"] = {"AM", "DSB", "SSB", "Unknown"};
    nlohmann::json counts = nlohmann::json::array();
    for (ModulationClass truth : kModulationClasses) {
        nlohmann::json row = nlohmann::json::array();
        for (Outcome o : {Outcome::AM, Outcome::DSB, Outcome::SSB, Outcome::Unknown})
            row.push_back(result.confusion.at(truth, o));
        counts.push_back(row);
    }
    confusion["counts"] = counts;
    j["confusion"] = confusion;

    nlohmann::json accuracy;
    for (ModulationClass cls : kModulationClasses)
        accuracy[to_string(cls)] = class_accuracy(result.confusion, cls);
    accuracy["overall"] = overall_accuracy(result.confusion);
    j["accuracy_percent"] = accuracy;

    if (result.train_ranges) j["train_ranges"] = ranges_to_json(*result.train_ranges);
    j["test_ranges"] = ranges_to_json(result.test_ranges);

    if (result.profile) {
        nlohmann::json profile;
        profile["method"] = to_string(result.profile->method);
        profile["margin"] = result.profile->margin;
        profile["calibration_count"] = result.profile->calibration_count;
        profile["gen_config_digest"] = result.profile->gen_config_digest;
        nlohmann::json intervals = nlohmann::json::array();
        for (const ClassInterval& iv : result.profile->intervals)
            intervals.push_back({{"class", to_string(iv.cls)}, {"lo", iv.lo}, {"hi", iv.hi}});
        profile["intervals"] = intervals;
        j["profile"] = profile;
    }

    j["timing"] = timing_to_json(result.timing);
    return j.dump(2) + "\n";
}

void export_report(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << report_to_json(result);
    out.flush();
    if (!out) throw IoError("failed while writing: " + path);
}

ConfusionMatrix confusion_from_report_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
        if (j.at("format").get<std::string>() != "rmod-report")
            throw IoError(path + ": not a report document");
        const auto& counts = j.at("confusion").at("counts");
        ConfusionMatrix cm;
        for (std::size_t row = 0; row < 3; ++row) {
            for (std::size_t col = 0; col < 4; ++col) {
                cm.add(kModulationClasses[row], static_cast<Outcome>(col),
                       counts.at(row).at(col).get<std::uint64_t>());
            }
        }
        return cm;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": report parse error: " + e.what());
    }
}

void export_envelope_trace(const SignalRecord& record, RMethod method,
                           const StftConfig& stft_cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    const double fs = record.config.sample_rate_hz;
    out << "# rmod-trace v1 method=" << to_string(method)
        << " class=" << to_string(record.label);
    if (method == RMethod::Stft) out << ' ' << stft_cfg.canonical_string();
    out << '\n';
    if (method == RMethod::Hilbert) {
        const Envelope env = envelope_hilbert(record.samples);
        for (std::size_t k = 0; k < env.values.size(); ++k)
            out << format_double(static_cast<double>(k) / fs) << ' '
                << format_double(env.values[k]) << '\n';
    } else {
        const Envelope env = envelope_stft(record.samples, stft_cfg);
        for (std::size_t t = 0; t < env.values.size(); ++t) {
            const double center =
                (static_cast<double>(t * stft_cfg.hop) +
                 static_cast<double>(stft_cfg.window_len) / 2.0) / fs;
            out << format_double(center) << ' ' << format_double(env.values[t]) << '\n';
        }
    }
    out.flush();
    if (!out) throw IoError("failed while writing: " + path);
}

namespace {

std::optional<std::uint64_t> status_field_kib(const char* key) {
    std::ifstream status("/proc/self/status");
    if (!status) return std::nullopt;
    std::string line;
    const std::size_t key_len = std::strlen(key);
    while (std::getline(status, line)) {
        if (line.rfind(key, 0) == 0) {
            std::istringstream fields(line.substr(key_len));
            std::uint64_t kib = 0;
            fields >> kib;
            if (fields) return kib;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<std::uint64_t> peak_rss_kib() {
    // some sandboxes omit the high-water mark; current RSS is the fallback
    if (auto hwm = status_field_kib("VmHWM:")) return hwm;
    return status_field_kib("VmRSS:");
}

void save_bench_report(const BenchReport& report, const std::string& path) {
    nlohmann::json j;
    j["format"] = "rmod-bench";
    j["version"] = 1;
    j["signal_count"] = report.signal_count;
    nlohmann::json methods;
    for (const auto& [method, entry] : report.entries)
        methods[to_string(method)] = timing_to_json(entry);
    j["methods"] = methods;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw IoError("failed while writing: " + path);
}

} // namespace rmod
