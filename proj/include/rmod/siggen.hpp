#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmod/rng.hpp"

namespace rmod {

enum class ModulationClass { AM, DSB, SSB };

inline constexpr std::array<ModulationClass, 3> kModulationClasses{
    ModulationClass::AM, ModulationClass::DSB, ModulationClass::SSB};

const char* to_string(ModulationClass cls);
ModulationClass modulation_from_string(std::string_view name);
std::size_t class_ordinal(ModulationClass cls); // AM=0, DSB=1, SSB=2

enum class Sideband { Upper, Lower };

struct GenConfig {
    double carrier_freq_hz = 1000.0;
    double sample_rate_hz = 10000.0;
    double duration_s = 0.020;
    double noise_power = 0.01; // variance of the additive Gaussian noise
    double mod_index = 1.0;    // AM only, in (0, 1]
    double message_freq_lo_hz = 200.0;
    double message_freq_hi_hz = 400.0;
    double message_amplitude = 1.0;
    Sideband ssb_sideband = Sideband::Upper;

    std::size_t sample_count() const; // round(duration_s * sample_rate_hz)
    void validate() const;            // throws ValidationError naming the field

    /// Stable key=value form, used for file headers and config digests.
    std::string canonical_string() const;
};

struct SignalRecord {
    ModulationClass label = ModulationClass::AM;
    std::vector<double> samples;
    double message_freq_hz = 0.0;
    double message_phase_rad = 0.0;
    std::uint64_t seed = 0;
    GenConfig config;
};

struct DatasetSpec {
    std::size_t counts_per_class = 100;
    std::uint64_t master_seed = 0;
    GenConfig config;
};

/// amplitude * cos(2*pi*freq*k/fs + phase), k = 0..n-1.
std::vector<double> generate_message(double freq_hz, double phase_rad, double amplitude,
                                     std::size_t n, double sample_rate_hz);

/// AM:  (1 + mod_index*x) * cos(w_c t)
/// DSB: x * cos(w_c t)
/// SSB: x * cos(w_c t) -/+ H(x) * sin(w_c t)   (- upper, + lower)
std::vector<double> modulate(ModulationClass cls, std::span<const double> message,
                             const GenConfig& config);

/// signal + i.i.d. Gaussian noise of the given variance. Zero power returns
/// the input untouched.
std::vector<double> add_awgn(std::span<const double> signal, double noise_power,
                             SplitMix64& rng);

/// One record from its seed: the stream draws the message cycle count, then
/// the phase, then the noise samples, in that order.
SignalRecord generate_record(ModulationClass label, std::uint64_t seed,
                             const GenConfig& config);

/// Class-major, index-minor, identical for every thread count.
std::vector<SignalRecord> generate_dataset(const DatasetSpec& spec, unsigned threads = 1);

struct Dataset {
    GenConfig config;
    std::vector<SignalRecord> records;
};

// Dataset file: one header line (format version + config), then one line per
// record: label,message_freq_hz,message_phase_rad,seed,s_0,...,s_{N-1}.
// Reals use shortest round-trip decimals, so write -> read -> write is
// byte-identical.
void write_dataset(std::ostream& out, const GenConfig& config,
                   std::span<const SignalRecord> records);
void write_dataset_file(const std::string& path, const GenConfig& config,
                        std::span<const SignalRecord> records);
Dataset read_dataset(std::istream& in);
Dataset read_dataset_file(const std::string& path);

} // namespace rmod
