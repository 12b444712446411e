// rmod: generate / calibrate / classify / evaluate / bench / trace
//
// Exit codes: 0 success, 1 usage or validation, 2 I/O or file format,
// 3 calibration failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmod/classifier.hpp"
#include "rmod/errors.hpp"
#include "rmod/eval.hpp"
#include "rmod/parallel.hpp"
#include "rmod/rstat.hpp"
#include "rmod/siggen.hpp"
#include "rmod/text.hpp"

namespace {

struct CliOptions {
    // generation
    std::size_t count = 100;
    std::uint64_t seed = 1;
    double carrier_freq_hz = 1000.0;
    double sample_rate_hz = 10000.0;
    double duration_s = 0.020;
    double noise_power = 0.01;
    double mod_index = 1.0;
    double msg_freq_lo_hz = 200.0;
    double msg_freq_hi_hz = 400.0;
    double msg_amplitude = 1.0;
    std::string ssb_sideband = "upper";
    // pipeline
    std::string method = "hilbert";
    double margin = 0.0;
    std::size_t window_len = 64;
    std::size_t hop = 16;
    std::string window = "hann";
    // misc
    unsigned threads = 1;
    std::string out_path;
    std::string in_path;
    std::string profile_path;
    std::string pred_path;
    std::string trace_class = "AM";
    std::vector<std::string> bench_methods{"hilbert", "stft"};
};

rmod::GenConfig gen_config_of(const CliOptions& o) {
    rmod::GenConfig cfg;
    cfg.carrier_freq_hz = o.carrier_freq_hz;
    cfg.sample_rate_hz = o.sample_rate_hz;
    cfg.duration_s = o.duration_s;
    cfg.noise_power = o.noise_power;
    cfg.mod_index = o.mod_index;
    cfg.message_freq_lo_hz = o.msg_freq_lo_hz;
    cfg.message_freq_hi_hz = o.msg_freq_hi_hz;
    cfg.message_amplitude = o.msg_amplitude;
    cfg.ssb_sideband = (o.ssb_sideband == "lower") ? rmod::Sideband::Lower
                                                   : rmod::Sideband::Upper;
    return cfg;
}

rmod::StftConfig stft_config_of(const CliOptions& o) {
    rmod::StftConfig cfg;
    cfg.window_len = o.window_len;
    cfg.hop = o.hop;
    cfg.window_fn = rmod::window_fn_from_string(o.window);
    return cfg;
}

void add_gen_flags(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--noise-power", o.noise_power, "Additive Gaussian noise variance")
        ->capture_default_str();
    cmd->add_option("--mod-index", o.mod_index, "AM modulation index in (0, 1]")
        ->capture_default_str();
    cmd->add_option("--carrier-freq", o.carrier_freq_hz, "Carrier frequency [Hz]")
        ->capture_default_str();
    cmd->add_option("--sample-rate", o.sample_rate_hz, "Sampling rate [Hz]")
        ->capture_default_str();
    cmd->add_option("--duration", o.duration_s, "Record duration [s]")
        ->capture_default_str();
    cmd->add_option("--msg-freq-lo", o.msg_freq_lo_hz, "Message frequency band low edge [Hz]")
        ->capture_default_str();
    cmd->add_option("--msg-freq-hi", o.msg_freq_hi_hz, "Message frequency band high edge [Hz]")
        ->capture_default_str();
    cmd->add_option("--msg-amplitude", o.msg_amplitude, "Message amplitude")
        ->capture_default_str();
    cmd->add_option("--ssb-sideband", o.ssb_sideband, "SSB sideband")
        ->check(CLI::IsMember({"upper", "lower"}))
        ->capture_default_str();
}

void add_stft_flags(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--window-len", o.window_len, "STFT window length [samples]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--hop", o.hop, "STFT hop [samples]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--window", o.window, "STFT window function")
        ->check(CLI::IsMember({"hann", "rectangular"}))
        ->capture_default_str();
}

void add_method_flag(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--method", o.method, "Envelope extraction method")
        ->check(CLI::IsMember({"hilbert", "stft"}))
        ->capture_default_str();
}

void add_threads_flag(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--threads", o.threads, "Worker threads (results are thread-count invariant)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::array<std::vector<double>, 3> group_by_class(const std::vector<rmod::SignalRecord>& records,
                                                  const std::vector<rmod::RValue>& rvals) {
    std::array<std::vector<double>, 3> by_class;
    for (std::size_t i = 0; i < records.size(); ++i)
        by_class[rmod::class_ordinal(records[i].label)].push_back(rvals[i].value);
    return by_class;
}

void warn_on_digest_mismatch(const rmod::ThresholdProfile& profile,
                             const rmod::GenConfig& gen_cfg,
                             const rmod::StftConfig& stft_cfg) {
    const std::string digest = rmod::config_digest(gen_cfg, profile.method, stft_cfg);
    if (!profile.gen_config_digest.empty() && digest != profile.gen_config_digest) {
        std::cerr << "warning: profile was calibrated under config digest "
                  << profile.gen_config_digest << " but the current config digests to "
                  << digest << "; decisions may not be meaningful\n";
    }
}

int cmd_generate(const CliOptions& o) {
    rmod::DatasetSpec spec{o.count, o.seed, gen_config_of(o)};
    const auto records = rmod::generate_dataset(spec, o.threads);
    rmod::write_dataset_file(o.out_path, spec.config, records);
    std::cout << "wrote " << records.size() << " records to " << o.out_path
              << " (gen config digest "
              << rmod::config_digest(spec.config, rmod::RMethod::Hilbert) << ")\n";
    return 0;
}

int cmd_calibrate(const CliOptions& o) {
    const rmod::Dataset ds = rmod::read_dataset_file(o.in_path);
    const rmod::RMethod method = rmod::rmethod_from_string(o.method);
    const rmod::StftConfig stft_cfg = stft_config_of(o);
    const auto rvals = rmod::batch_r_values(ds.records, method, stft_cfg, o.threads);
    const auto by_class = group_by_class(ds.records, rvals);
    const rmod::ThresholdProfile profile =
        rmod::calibrate(by_class, method, o.margin,
                        rmod::config_digest(ds.config, method, stft_cfg));
    rmod::save_profile(profile, o.out_path);
    std::cout << "calibrated " << rmod::to_string(method) << " profile from "
              << ds.records.size() << " records (margin " << o.margin << "):\n";
    for (const rmod::ClassInterval& iv : profile.intervals)
        std::cout << "  " << rmod::to_string(iv.cls) << " [" << rmod::format_double(iv.lo)
                  << ", " << rmod::format_double(iv.hi) << "]\n";
    std::cout << "wrote profile to " << o.out_path << "\n";
    return 0;
}

int cmd_classify(const CliOptions& o) {
    const rmod::Dataset ds = rmod::read_dataset_file(o.in_path);
    const rmod::ThresholdProfile profile = rmod::load_profile(o.profile_path);
    const rmod::StftConfig stft_cfg = stft_config_of(o);
    warn_on_digest_mismatch(profile, ds.config, stft_cfg);

    std::vector<rmod::Decision> decisions(ds.records.size());
    rmod::parallel_for(ds.records.size(), o.threads, [&](std::size_t i) {
        decisions[i] = rmod::classify_record(ds.records[i], profile, stft_cfg);
    });

    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw rmod::IoError("cannot open for writing: " + o.out_path);
    out << "#rmod-predictions v1 method=" << rmod::to_string(profile.method)
        << " profile_digest=" << profile.gen_config_digest << '\n';
    std::size_t unknown = 0;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        out << i << ',' << rmod::to_string(ds.records[i].label) << ','
            << rmod::to_string(decisions[i].outcome) << ','
            << rmod::format_double(decisions[i].r.value) << '\n';
        if (decisions[i].outcome == rmod::Outcome::Unknown) ++unknown;
    }
    out.flush();
    if (!out) throw rmod::IoError("failed while writing: " + o.out_path);
    std::cout << "classified " << decisions.size() << " records (" << unknown
              << " Unknown), predictions in " << o.out_path << "\n";
    return 0;
}

void print_accuracies(const rmod::ConfusionMatrix& cm) {
    for (rmod::ModulationClass cls : rmod::kModulationClasses)
        std::cout << "  " << rmod::to_string(cls) << " accuracy: "
                  << rmod::class_accuracy(cm, cls) << "%\n";
    std::cout << "  overall: " << rmod::overall_accuracy(cm) << "%\n";
}

int cmd_evaluate(const CliOptions& o) {
    rmod::ExperimentResult result;
    if (!o.pred_path.empty()) {
        // score an existing predictions file
        std::ifstream in(o.pred_path, std::ios::binary);
        if (!in) throw rmod::IoError("cannot open for reading: " + o.pred_path);
        std::string line;
        if (!std::getline(in, line) || line.rfind("#rmod-predictions", 0) != 0)
            throw rmod::IoError(o.pred_path + ": not a predictions file");
        const bool stft = line.find("method=stft") != std::string::npos;
        result.method = stft ? rmod::RMethod::Stft : rmod::RMethod::Hilbert;
        std::array<std::vector<double>, 3> by_class;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream fields(line);
            std::string index, truth, decision, rval;
            if (!std::getline(fields, index, ',') || !std::getline(fields, truth, ',') ||
                !std::getline(fields, decision, ',') || !std::getline(fields, rval))
                throw rmod::IoError(o.pred_path + ": malformed line: " + line);
            const rmod::ModulationClass cls = rmod::modulation_from_string(truth);
            result.confusion.add(cls, rmod::outcome_from_string(decision));
            by_class[rmod::class_ordinal(cls)].push_back(rmod::parse_double(rval));
        }
        result.test_ranges = rmod::summarize_ranges(by_class, result.method);
    } else {
        const rmod::Dataset ds = rmod::read_dataset_file(o.in_path);
        const rmod::ThresholdProfile profile = rmod::load_profile(o.profile_path);
        const rmod::StftConfig stft_cfg = stft_config_of(o);
        warn_on_digest_mismatch(profile, ds.config, stft_cfg);
        result.method = profile.method;
        result.margin = profile.margin;
        result.stft_cfg = stft_cfg;
        result.profile = profile;

        std::vector<rmod::Decision> decisions(ds.records.size());
        const auto t0 = std::chrono::steady_clock::now();
        rmod::parallel_for(ds.records.size(), o.threads, [&](std::size_t i) {
            decisions[i] = rmod::classify_record(ds.records[i], profile, stft_cfg);
        });
        const auto t1 = std::chrono::steady_clock::now();
        std::array<std::vector<double>, 3> by_class;
        for (std::size_t i = 0; i < decisions.size(); ++i) {
            result.confusion.add(ds.records[i].label, decisions[i].outcome);
            by_class[rmod::class_ordinal(ds.records[i].label)].push_back(decisions[i].r.value);
        }
        result.test_ranges = rmod::summarize_ranges(by_class, result.method);
        result.timing.total_wall_s = std::chrono::duration<double>(t1 - t0).count();
        result.timing.signal_count = decisions.size();
        result.timing.per_signal_mean_s =
            result.timing.total_wall_s / static_cast<double>(decisions.size());
        result.timing.peak_rss_kib = rmod::peak_rss_kib();
    }

    std::cout << "evaluation (" << rmod::to_string(result.method) << "):\n";
    print_accuracies(result.confusion);
    if (!o.out_path.empty()) {
        rmod::export_report(result, o.out_path);
        std::cout << "wrote report to " << o.out_path << "\n";
    }
    return 0;
}

int cmd_bench(const CliOptions& o) {
    rmod::DatasetSpec spec{o.count, o.seed, gen_config_of(o)};
    const auto records = rmod::generate_dataset(spec, o.threads);
    const rmod::StftConfig stft_cfg = stft_config_of(o);

    rmod::BenchReport report;
    report.signal_count = records.size();
    for (const std::string& name : o.bench_methods) {
        const rmod::RMethod method = rmod::rmethod_from_string(name);
        const auto t0 = std::chrono::steady_clock::now();
        const auto rvals = rmod::batch_r_values(records, method, stft_cfg, o.threads);
        const auto t1 = std::chrono::steady_clock::now();
        (void)rvals;
        rmod::BenchEntry entry;
        entry.total_wall_s = std::chrono::duration<double>(t1 - t0).count();
        entry.signal_count = records.size();
        entry.per_signal_mean_s = entry.total_wall_s / static_cast<double>(records.size());
        entry.peak_rss_kib = rmod::peak_rss_kib();
        report.entries.emplace_back(method, entry);
        std::cout << "  " << rmod::to_string(method) << ": total "
                  << entry.total_wall_s << " s, per signal "
                  << entry.per_signal_mean_s * 1e6 << " us\n";
    }
    if (!o.out_path.empty()) {
        rmod::save_bench_report(report, o.out_path);
        std::cout << "wrote bench report to " << o.out_path << "\n";
    }
    return 0;
}

int cmd_trace(const CliOptions& o) {
    const rmod::GenConfig cfg = gen_config_of(o);
    const rmod::ModulationClass cls = rmod::modulation_from_string(o.trace_class);
    const rmod::RMethod method = rmod::rmethod_from_string(o.method);
    const std::uint64_t seed = rmod::stable_mix(o.seed, rmod::class_ordinal(cls), 0);
    const rmod::SignalRecord record = rmod::generate_record(cls, seed, cfg);
    rmod::export_envelope_trace(record, method, stft_config_of(o), o.out_path);
    std::cout << "wrote " << rmod::to_string(method) << " envelope trace of a "
              << rmod::to_string(cls) << " record to " << o.out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CliOptions o;
    CLI::App app{"R-value (variance over squared envelope mean) modulation classifier"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a config file (flags win)");
    app.fallthrough();

    CLI::App* generate = app.add_subcommand("generate", "Synthesize a labeled dataset file");
    generate->add_option("--count", o.count, "Records per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    generate->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    generate->add_option("--out", o.out_path, "Output dataset path")->required();
    add_gen_flags(generate, o);
    add_threads_flag(generate, o);

    CLI::App* calibrate = app.add_subcommand("calibrate", "Fit per-class R intervals");
    calibrate->add_option("--in", o.in_path, "Input dataset path")->required();
    calibrate->add_option("--out", o.out_path, "Output profile path")->required();
    calibrate->add_option("--margin", o.margin, "Fractional interval widening")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_method_flag(calibrate, o);
    add_stft_flags(calibrate, o);
    add_threads_flag(calibrate, o);

    CLI::App* classify = app.add_subcommand("classify", "Classify a dataset against a profile");
    classify->add_option("--in", o.in_path, "Input dataset path")->required();
    classify->add_option("--profile", o.profile_path, "Profile path")->required();
    classify->add_option("--out", o.out_path, "Output predictions path")->required();
    add_stft_flags(classify, o);
    add_threads_flag(classify, o);

    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Accuracy report from predictions, or from dataset + profile");
    evaluate->add_option("--pred", o.pred_path, "Predictions file to score");
    evaluate->add_option("--in", o.in_path, "Input dataset path");
    evaluate->add_option("--profile", o.profile_path, "Profile path");
    evaluate->add_option("--out", o.out_path, "Output report path");
    add_stft_flags(evaluate, o);
    add_threads_flag(evaluate, o);

    CLI::App* bench = app.add_subcommand("bench", "Time the envelope pipelines");
    bench->add_option("--count", o.count, "Records per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    bench->add_option("--methods", o.bench_methods, "Methods to time")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--out", o.out_path, "Output bench report path");
    add_gen_flags(bench, o);
    add_stft_flags(bench, o);
    add_threads_flag(bench, o);

    CLI::App* trace = app.add_subcommand("trace", "Export one record's envelope for plotting");
    trace->add_option("--class", o.trace_class, "Modulation class")
        ->check(CLI::IsMember({"AM", "DSB", "SSB"}))
        ->capture_default_str();
    trace->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    trace->add_option("--out", o.out_path, "Output trace path")->required();
    add_method_flag(trace, o);
    add_gen_flags(trace, o);
    add_stft_flags(trace, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (evaluate->parsed() && o.pred_path.empty() &&
            (o.in_path.empty() || o.profile_path.empty()))
            throw rmod::ValidationError("evaluate needs --pred, or both --in and --profile");
        if (generate->parsed()) return cmd_generate(o);
        if (calibrate->parsed()) return cmd_calibrate(o);
        if (classify->parsed()) return cmd_classify(o);
        if (evaluate->parsed()) return cmd_evaluate(o);
        if (bench->parsed()) return cmd_bench(o);
        if (trace->parsed()) return cmd_trace(o);
    } catch (const rmod::CalibrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const rmod::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rmod::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
