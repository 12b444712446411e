#include "rmod/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmod/errors.hpp"

namespace rmod {

namespace {

constexpr std::size_t kMinCalibrationSamples = 10;

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

} // namespace

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::AM: return "AM";
        case Outcome::DSB: return "DSB";
        case Outcome::SSB: return "SSB";
        case Outcome::Unknown: return "Unknown";
    }
    return "?";
}

Outcome outcome_from_string(std::string_view name) {
    if (name == "AM") return Outcome::AM;
    if (name == "DSB") return Outcome::DSB;
    if (name == "SSB") return Outcome::SSB;
    if (name == "Unknown") return Outcome::Unknown;
    throw ValidationError("unknown outcome: " + std::string(name));
}

Outcome outcome_of(ModulationClass cls) {
    switch (cls) {
        case ModulationClass::AM: return Outcome::AM;
        case ModulationClass::DSB: return Outcome::DSB;
        case ModulationClass::SSB: return Outcome::SSB;
    }
    return Outcome::Unknown;
}

std::string config_digest(const GenConfig& gen_cfg, RMethod method,
                          const StftConfig& stft_cfg) {
    std::string text = gen_cfg.canonical_string();
    if (method == RMethod::Stft) {
        text += ';';
        text += stft_cfg.canonical_string();
    }
    return hex64(fnv1a64(text));
}

ThresholdProfile calibrate(const std::array<std::vector<double>, 3>& r_samples_per_class,
                           RMethod method, double margin,
                           const std::string& gen_config_digest) {
    if (margin < 0.0) throw ValidationError("calibrate: margin must be nonnegative");
    ThresholdProfile profile;
    profile.method = method;
    profile.margin = margin;
    profile.gen_config_digest = gen_config_digest;
    profile.calibration_count = r_samples_per_class[0].size();
    for (std::size_t i = 0; i < 3; ++i) {
        const std::vector<double>& samples = r_samples_per_class[i];
        const ModulationClass cls = kModulationClasses[i];
        if (samples.size() < kMinCalibrationSamples)
            throw CalibrationError(std::string("calibrate: class ") + to_string(cls) +
                                   " has " + std::to_string(samples.size()) +
                                   " samples, need at least " +
                                   std::to_string(kMinCalibrationSamples));
        const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
        double lo = *lo_it;
        double hi = *hi_it;
        if (lo == hi && margin == 0.0)
            throw CalibrationError(std::string("calibrate: class ") + to_string(cls) +
                                   " has a degenerate [min,max] interval and margin is 0");
        const double widen = margin * (hi - lo) * 0.5;
        profile.intervals[i] = {cls, lo - widen, hi + widen};
        profile.calibration_count = std::min(profile.calibration_count, samples.size());
    }
    return profile;
}

Decision classify_r(const RValue& r, const ThresholdProfile& profile) {
    if (r.method != profile.method)
        throw MethodMismatchError(std::string("classify_r: r computed with ") +
                                  to_string(r.method) + " but profile calibrated for " +
                                  to_string(profile.method));
    Decision d;
    d.r = r;
    const ClassInterval* best = nullptr;
    for (const ClassInterval& iv : profile.intervals) {
        if (!iv.contains(r.value)) continue;
        ++d.matched;
        if (!best) {
            best = &iv;
        } else {
            // nearest midpoint wins; the AM < DSB < SSB scan order settles ties
            const double cur = std::abs(r.value - best->midpoint());
            const double alt = std::abs(r.value - iv.midpoint());
            if (alt < cur) best = &iv;
        }
    }
    d.outcome = best ? outcome_of(best->cls) : Outcome::Unknown;
    return d;
}

Decision classify_samples(std::span<const double> samples, const ThresholdProfile& profile,
                          const StftConfig& stft_cfg) {
    try {
        return classify_r(r_pipeline(samples, profile.method, stft_cfg), profile);
    } catch (const DegenerateSignalError&) {
        Decision d;
        d.outcome = Outcome::Unknown;
        d.r = RValue{0.0, profile.method, 0};
        d.degenerate = true;
        return d;
    }
}

Decision classify_record(const SignalRecord& record, const ThresholdProfile& profile,
                         const StftConfig& stft_cfg) {
    return classify_samples(record.samples, profile, stft_cfg);
}

std::string profile_to_json(const ThresholdProfile& profile) {
    nlohmann::json j;
    j["format"] = "rmod-profile";
    j["version"] = 1;
    j["method"] = to_string(profile.method);
    j["margin"] = profile.margin;
    j["calibration_count"] = profile.calibration_count;
    j["gen_config_digest"] = profile.gen_config_digest;
    nlohmann::json intervals = nlohmann::json::array();
    for (const ClassInterval& iv : profile.intervals) {
        intervals.push_back({{"class", to_string(iv.cls)}, {"lo", iv.lo}, {"hi", iv.hi}});
    }
    j["intervals"] = intervals;
    return j.dump(2) + "\n";
}

ThresholdProfile profile_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("profile parse error: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "rmod-profile")
            throw IoError("not a profile document");
        if (j.at("version").get<int>() != 1)
            throw IoError("unsupported profile version");
        ThresholdProfile p;
        p.method = rmethod_from_string(j.at("method").get<std::string>());
        p.margin = j.at("margin").get<double>();
        p.calibration_count = j.at("calibration_count").get<std::size_t>();
        p.gen_config_digest = j.at("gen_config_digest").get<std::string>();
        const auto& intervals = j.at("intervals");
        if (!intervals.is_array() || intervals.size() != 3)
            throw IoError("profile must carry exactly three intervals");
        for (const auto& item : intervals) {
            const ModulationClass cls =
                modulation_from_string(item.at("class").get<std::string>());
            ClassInterval iv{cls, item.at("lo").get<double>(), item.at("hi").get<double>()};
            if (!(iv.lo <= iv.hi)) throw IoError("profile interval has lo > hi");
            p.intervals[class_ordinal(cls)] = iv;
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("profile field error: ") + e.what());
    }
}

void save_profile(const ThresholdProfile& profile, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << profile_to_json(profile);
    out.flush();
    if (!out) throw IoError("failed while writing: " + path);
}

ThresholdProfile load_profile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return profile_from_json(buf.str());
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

} // namespace rmod
