#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmod/classifier.hpp"

namespace rmod {

// Rows: true class (AM, DSB, SSB). Columns: decision (AM, DSB, SSB, Unknown).
class ConfusionMatrix {
public:
    void add(ModulationClass truth, Outcome decision, std::uint64_t count = 1);
    std::uint64_t at(ModulationClass truth, Outcome decision) const;
    std::uint64_t row_sum(ModulationClass truth) const;
    std::uint64_t grand_total() const;
    std::uint64_t diagonal_total() const; // 3x3 sub-block trace

private:
    std::array<std::array<std::uint64_t, 4>, 3> counts_{};
};

/// Percentage of a row landing on its diagonal. Unknown never counts.
double class_accuracy(const ConfusionMatrix& cm, ModulationClass cls);
double overall_accuracy(const ConfusionMatrix& cm);

struct ClassStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double median = 0.0;
};

struct RangeSummary {
    RMethod method = RMethod::Hilbert;
    std::array<ClassStats, 3> per_class{}; // AM, DSB, SSB order
};

RangeSummary summarize_ranges(const std::array<std::vector<double>, 3>& r_values_per_class,
                              RMethod method);

struct BenchEntry {
    double total_wall_s = 0.0;
    double per_signal_mean_s = 0.0;
    std::size_t signal_count = 0;
    std::optional<std::uint64_t> peak_rss_kib;
    std::string rss_method = "VmHWM (VmRSS fallback) from /proc/self/status";
};

struct BenchReport {
    std::size_t signal_count = 0;
    std::vector<std::pair<RMethod, BenchEntry>> entries;
};

struct ExperimentResult {
    RMethod method = RMethod::Hilbert;
    double margin = 0.0;
    StftConfig stft_cfg;
    std::optional<ThresholdProfile> profile;     // absent when scoring a predictions file
    ConfusionMatrix confusion;
    std::optional<RangeSummary> train_ranges;    // present only for full experiments
    RangeSummary test_ranges;
    BenchEntry timing; // envelope + R + decision stage only
};

/// calibrate on train_spec, classify test_spec, time only the
/// envelope+R+decision stage. Everything except the timing fields is a pure
/// function of the inputs.
ExperimentResult run_experiment(const DatasetSpec& train_spec, const DatasetSpec& test_spec,
                                RMethod method, const StftConfig& stft_cfg, double margin,
                                unsigned threads = 1);

/// R values for a whole dataset, slot-per-record, optionally in parallel.
std::vector<RValue> batch_r_values(const std::vector<SignalRecord>& records, RMethod method,
                                   const StftConfig& stft_cfg, unsigned threads = 1);

// Report file: versioned JSON carrying the confusion matrix, accuracies,
// range summaries, profile echo and timing.
void export_report(const ExperimentResult& result, const std::string& path);
std::string report_to_json(const ExperimentResult& result);
ConfusionMatrix confusion_from_report_file(const std::string& path);

/// Two-column (time_s, envelope) text with one header line.
void export_envelope_trace(const SignalRecord& record, RMethod method,
                           const StftConfig& stft_cfg, const std::string& path);

/// Peak resident set, if the platform exposes it.
std::optional<std::uint64_t> peak_rss_kib();

void save_bench_report(const BenchReport& report, const std::string& path);

} // namespace rmod
