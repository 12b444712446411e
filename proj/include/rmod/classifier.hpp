#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rmod/rstat.hpp"
#include "rmod/siggen.hpp"

namespace rmod {

struct ClassInterval {
    ModulationClass cls = ModulationClass::AM;
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double value) const { return lo <= value && value <= hi; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

struct ThresholdProfile {
    RMethod method = RMethod::Hilbert;
    std::array<ClassInterval, 3> intervals{}; // AM, DSB, SSB order
    double margin = 0.0;
    std::string gen_config_digest;
    std::size_t calibration_count = 0;
};

enum class Outcome { AM, DSB, SSB, Unknown };

const char* to_string(Outcome outcome);
Outcome outcome_from_string(std::string_view name);
Outcome outcome_of(ModulationClass cls);

struct Decision {
    Outcome outcome = Outcome::Unknown;
    RValue r;
    std::size_t matched = 0;   // intervals containing r
    bool degenerate = false;   // signal could not produce an R value
};

/// FNV-1a over the canonical GenConfig string, plus the StftConfig string
/// when the method is stft (the hilbert pipeline never reads it).
std::string config_digest(const GenConfig& gen_cfg, RMethod method,
                          const StftConfig& stft_cfg = {});

/// Per class: [min, max] of the training R values, widened symmetrically by
/// margin * (max - min). Requires at least 10 samples per class.
ThresholdProfile calibrate(const std::array<std::vector<double>, 3>& r_samples_per_class,
                           RMethod method, double margin,
                           const std::string& gen_config_digest = "");

/// Inclusive containment; no interval -> Unknown; several -> nearest
/// midpoint, ties broken in AM < DSB < SSB order.
Decision classify_r(const RValue& r, const ThresholdProfile& profile);

/// Full pipeline. Degenerate signals come back as Unknown with the flag set
/// instead of throwing.
Decision classify_samples(std::span<const double> samples, const ThresholdProfile& profile,
                          const StftConfig& stft_cfg = {});
Decision classify_record(const SignalRecord& record, const ThresholdProfile& profile,
                         const StftConfig& stft_cfg = {});

// Profile file: versioned JSON document, round-trip exact.
void save_profile(const ThresholdProfile& profile, const std::string& path);
ThresholdProfile load_profile(const std::string& path);
std::string profile_to_json(const ThresholdProfile& profile);
ThresholdProfile profile_from_json(const std::string& text);

} // namespace rmod
