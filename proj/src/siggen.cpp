#include "rmod/siggen.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rmod/dsp.hpp"
#include "rmod/errors.hpp"
#include "rmod/parallel.hpp"
#include "rmod/text.hpp"

namespace rmod {

namespace {

constexpr std::string_view kDatasetMagic = "#rmod-dataset";
constexpr std::string_view kDatasetVersion = "v1";

// Integer message-cycle bounds for a config. Drawing the cycle count (rather
// than a raw frequency) keeps every message periodic over the record, which
// is what makes the per-class R bands tight.
std::pair<std::int64_t, std::int64_t> cycle_bounds(const GenConfig& cfg) {
    const double lo = cfg.message_freq_lo_hz * cfg.duration_s;
    const double hi = cfg.message_freq_hi_hz * cfg.duration_s;
    const auto k_lo = static_cast<std::int64_t>(std::ceil(lo - 1e-9));
    const auto k_hi = static_cast<std::int64_t>(std::floor(hi + 1e-9));
    return {k_lo, k_hi};
}

} // namespace

const char* to_string(ModulationClass cls) {
    switch (cls) {
        case ModulationClass::AM: return "AM";
        case ModulationClass::DSB: return "DSB";
        case ModulationClass::SSB: return "SSB";
    }
    return "?";
}

ModulationClass modulation_from_string(std::string_view name) {
    if (name == "AM") return ModulationClass::AM;
    if (name == "DSB") return ModulationClass::DSB;
    if (name == "SSB") return ModulationClass::SSB;
    throw ValidationError("unknown modulation class: " + std::string(name));
}

std::size_t class_ordinal(ModulationClass cls) {
    return static_cast<std::size_t>(cls);
}

std::size_t GenConfig::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

void GenConfig::validate() const {
    if (!(sample_rate_hz > 0.0)) throw ValidationError("sample_rate_hz must be positive");
    if (!(carrier_freq_hz > 0.0)) throw ValidationError("carrier_freq_hz must be positive");
    if (!(carrier_freq_hz < sample_rate_hz / 2.0))
        throw ValidationError("carrier_freq_hz must be below the Nyquist rate");
    if (!(duration_s > 0.0)) throw ValidationError("duration_s must be positive");
    const double n_exact = duration_s * sample_rate_hz;
    const double n_round = std::round(n_exact);
    if (std::abs(n_exact - n_round) > 1e-6 * std::max(1.0, n_round))
        throw ValidationError("duration_s * sample_rate_hz must be an integer sample count");
    if (n_round < 16.0) throw ValidationError("duration_s too short: need at least 16 samples");
    if (!(noise_power >= 0.0)) throw ValidationError("noise_power must be nonnegative");
    if (!(mod_index > 0.0 && mod_index <= 1.0))
        throw ValidationError("mod_index must lie in (0, 1]");
    if (!(message_freq_lo_hz > 0.0)) throw ValidationError("message_freq_lo_hz must be positive");
    if (!(message_freq_lo_hz <= message_freq_hi_hz))
        throw ValidationError("message_freq_lo_hz must not exceed message_freq_hi_hz");
    if (!(message_freq_hi_hz < carrier_freq_hz))
        throw ValidationError("message_freq_hi_hz must be below carrier_freq_hz");
    if (!(message_amplitude > 0.0)) throw ValidationError("message_amplitude must be positive");
    const auto [k_lo, k_hi] = cycle_bounds(*this);
    if (k_lo > k_hi)
        throw ValidationError("message_freq_range_hz contains no integer-cycle frequency");
}

std::string GenConfig::canonical_string() const {
    std::string s;
    s += "carrier_freq_hz=" + format_double(carrier_freq_hz);
    s += ",sample_rate_hz=" + format_double(sample_rate_hz);
    s += ",duration_s=" + format_double(duration_s);
    s += ",noise_power=" + format_double(noise_power);
    s += ",mod_index=" + format_double(mod_index);
    s += ",message_freq_lo_hz=" + format_double(message_freq_lo_hz);
    s += ",message_freq_hi_hz=" + format_double(message_freq_hi_hz);
    s += ",message_amplitude=" + format_double(message_amplitude);
    s += ",ssb_sideband=";
    s += (ssb_sideband == Sideband::Upper) ? "upper" : "lower";
    return s;
}

std::vector<double> generate_message(double freq_hz, double phase_rad, double amplitude,
                                     std::size_t n, double sample_rate_hz) {
    if (n < 1) throw ValidationError("generate_message: n must be >= 1");
    if (!(freq_hz > 0.0) || !(freq_hz < sample_rate_hz / 2.0))
        throw ValidationError("generate_message: freq_hz must lie in (0, Nyquist)");
    std::vector<double> out(n);
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    for (std::size_t k = 0; k < n; ++k)
        out[k] = amplitude * std::cos(w * static_cast<double>(k) + phase_rad);
    return out;
}

std::vector<double> modulate(ModulationClass cls, std::span<const double> message,
                             const GenConfig& config) {
    const std::size_t n = config.sample_count();
    if (message.size() != n)
        throw ValidationError("modulate: message length does not match config");
    const double w_c = 2.0 * std::numbers::pi * config.carrier_freq_hz / config.sample_rate_hz;
    std::vector<double> out(n);
    switch (cls) {
        case ModulationClass::AM:
            for (std::size_t k = 0; k < n; ++k)
                out[k] = (1.0 + config.mod_index * message[k]) *
                         std::cos(w_c * static_cast<double>(k));
            break;
        case ModulationClass::DSB:
            for (std::size_t k = 0; k < n; ++k)
                out[k] = message[k] * std::cos(w_c * static_cast<double>(k));
            break;
        case ModulationClass::SSB: {
            // phasing method; H(x) comes from the analytic signal of the message
            const ComplexSeries analytic = analytic_signal(message, config.sample_rate_hz);
            const double sign = (config.ssb_sideband == Sideband::Upper) ? -1.0 : 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double t = w_c * static_cast<double>(k);
                out[k] = message[k] * std::cos(t) +
                         sign * analytic.values[k].imag() * std::sin(t);
            }
            break;
        }
    }
    return out;
}

std::vector<double> add_awgn(std::span<const double> signal, double noise_power,
                             SplitMix64& rng) {
    if (!(noise_power >= 0.0)) throw ValidationError("add_awgn: noise_power must be >= 0");
    std::vector<double> out(signal.begin(), signal.end());
    if (noise_power == 0.0) return out;
    const double sigma = std::sqrt(noise_power);
    for (double& v : out) v += rng.next_gaussian(sigma);
    return out;
}

SignalRecord generate_record(ModulationClass label, std::uint64_t seed,
                             const GenConfig& config) {
    config.validate();
    SplitMix64 stream(seed);
    const auto [k_lo, k_hi] = cycle_bounds(config);
    const auto span = static_cast<std::uint64_t>(k_hi - k_lo + 1);
    auto cycles = k_lo + static_cast<std::int64_t>(stream.next_unit() * static_cast<double>(span));
    cycles = std::min<std::int64_t>(cycles, k_hi);
    const double freq = static_cast<double>(cycles) / config.duration_s;
    const double phase = stream.next_uniform(0.0, 2.0 * std::numbers::pi);

    SignalRecord rec;
    rec.label = label;
    rec.message_freq_hz = freq;
    rec.message_phase_rad = phase;
    rec.seed = seed;
    rec.config = config;
    const std::vector<double> message = generate_message(
        freq, phase, config.message_amplitude, config.sample_count(), config.sample_rate_hz);
    rec.samples = add_awgn(modulate(label, message, config), config.noise_power, stream);
    return rec;
}

std::vector<SignalRecord> generate_dataset(const DatasetSpec& spec, unsigned threads) {
    if (spec.counts_per_class < 1)
        throw ValidationError("generate_dataset: counts_per_class must be >= 1");
    spec.config.validate();
    const std::size_t total = 3 * spec.counts_per_class;
    std::vector<SignalRecord> records(total);
    parallel_for(total, threads, [&](std::size_t i) {
        const std::size_t ord = i / spec.counts_per_class;
        const std::size_t idx = i % spec.counts_per_class;
        const ModulationClass cls = kModulationClasses[ord];
        const std::uint64_t seed = stable_mix(spec.master_seed, ord, idx);
        records[i] = generate_record(cls, seed, spec.config);
    });
    return records;
}

void write_dataset(std::ostream& out, const GenConfig& config,
                   std::span<const SignalRecord> records) {
    out << kDatasetMagic << ' ' << kDatasetVersion << ' ' << config.canonical_string() << '\n';
    std::string line;
    for (const SignalRecord& rec : records) {
        line.clear();
        line += to_string(rec.label);
        line += ',';
        line += format_double(rec.message_freq_hz);
        line += ',';
        line += format_double(rec.message_phase_rad);
        line += ',';
        line += std::to_string(rec.seed);
        for (double s : rec.samples) {
            line += ',';
            line += format_double(s);
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoError("failed while writing dataset stream");
}

void write_dataset_file(const std::string& path, const GenConfig& config,
                        std::span<const SignalRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_dataset(out, config, records);
    out.flush();
    if (!out) throw IoError("failed while writing: " + path);
}

namespace {

GenConfig parse_config_fields(std::string_view text, const std::string& context) {
    GenConfig cfg;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view field = text.substr(pos, comma - pos);
        const std::size_t eq = field.find('=');
        if (eq == std::string_view::npos)
            throw IoError("malformed config field in " + context);
        const std::string_view key = field.substr(0, eq);
        const std::string_view val = field.substr(eq + 1);
        if (key == "carrier_freq_hz") cfg.carrier_freq_hz = parse_double(val);
        else if (key == "sample_rate_hz") cfg.sample_rate_hz = parse_double(val);
        else if (key == "duration_s") cfg.duration_s = parse_double(val);
        else if (key == "noise_power") cfg.noise_power = parse_double(val);
        else if (key == "mod_index") cfg.mod_index = parse_double(val);
        else if (key == "message_freq_lo_hz") cfg.message_freq_lo_hz = parse_double(val);
        else if (key == "message_freq_hi_hz") cfg.message_freq_hi_hz = parse_double(val);
        else if (key == "message_amplitude") cfg.message_amplitude = parse_double(val);
        else if (key == "ssb_sideband") {
            if (val == "upper") cfg.ssb_sideband = Sideband::Upper;
            else if (val == "lower") cfg.ssb_sideband = Sideband::Lower;
            else throw IoError("bad ssb_sideband value in " + context);
        } else {
            throw IoError("unknown config field '" + std::string(key) + "' in " + context);
        }
        pos = comma + 1;
    }
    return cfg;
}

} // namespace

Dataset read_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("dataset stream is empty");
    std::istringstream header(line);
    std::string magic, version, config_text;
    header >> magic >> version >> config_text;
    if (magic != kDatasetMagic)
        throw IoError("not a dataset file (bad magic)");
    if (version != kDatasetVersion)
        throw IoError("unsupported dataset format version: " + version);

    Dataset ds;
    ds.config = parse_config_fields(config_text, "dataset header");
    try {
        ds.config.validate();
    } catch (const ValidationError& e) {
        throw IoError(std::string("dataset header carries an invalid config: ") + e.what());
    }
    const std::size_t n = ds.config.sample_count();

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        SignalRecord rec;
        rec.config = ds.config;
        std::size_t pos = 0;
        std::size_t field = 0;
        rec.samples.reserve(n);
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            const std::string_view token(line.data() + pos, comma - pos);
            switch (field) {
                case 0: rec.label = modulation_from_string(token); break;
                case 1: rec.message_freq_hz = parse_double(token); break;
                case 2: rec.message_phase_rad = parse_double(token); break;
                case 3: rec.seed = parse_u64(token); break;
                default: rec.samples.push_back(parse_double(token)); break;
            }
            ++field;
            pos = comma + 1;
            if (comma == line.size()) break;
        }
        if (rec.samples.size() != n)
            throw IoError("dataset line " + std::to_string(line_no) + ": expected " +
                          std::to_string(n) + " samples, got " +
                          std::to_string(rec.samples.size()));
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

Dataset read_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    try {
        return read_dataset(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

} // namespace rmod
