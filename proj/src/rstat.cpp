#include "rmod/rstat.hpp"

#include <cmath>
#include <string>

#include "rmod/errors.hpp"

namespace rmod {

const char* to_string(RMethod method) {
    return method == RMethod::Hilbert ? "hilbert" : "stft";
}

RMethod rmethod_from_string(std::string_view name) {
    if (name == "hilbert") return RMethod::Hilbert;
    if (name == "stft") return RMethod::Stft;
    throw ValidationError("unknown method: " + std::string(name));
}

double mean(std::span<const double> values) {
    if (values.empty()) throw ValidationError("mean: empty input");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
    if (values.size() < 2) throw ValidationError("variance: need at least 2 values");
    const double m = mean(values);
    double sum = 0.0;
    for (double v : values) {
        const double d = v - m;
        sum += d * d;
    }
    return sum / static_cast<double>(values.size());
}

namespace {

RValue ratio_of(std::span<const double> values, RMethod method) {
    const double m = mean(values);
    if (!(m > 0.0))
        throw DegenerateSignalError("zero-mean envelope (all-zero signal?)");
    return {variance(values) / (m * m), method, values.size()};
}

} // namespace

RValue r_value(const Envelope& envelope) {
    const RMethod method =
        envelope.source == EnvelopeSource::Hilbert ? RMethod::Hilbert : RMethod::Stft;
    return ratio_of(envelope.values, method);
}

RValue r_spectrogram(const Spectrogram& spectrogram) {
    std::vector<double> cells;
    cells.reserve(spectrogram.raw().size());
    for (const cdouble& v : spectrogram.raw()) cells.push_back(std::abs(v));
    return ratio_of(cells, RMethod::Stft);
}

RValue r_pipeline(std::span<const double> samples, RMethod method,
                  const StftConfig& stft_cfg) {
    Envelope env = envelope_hilbert(samples);
    if (method == RMethod::Hilbert) return r_value(env);
    ComplexSeries series;
    series.values.assign(env.values.begin(), env.values.end());
    return r_spectrogram(stft(series, stft_cfg));
}

RValue r_pipeline(const SignalRecord& record, RMethod method, const StftConfig& stft_cfg) {
    return r_pipeline(std::span<const double>(record.samples), method, stft_cfg);
}

} // namespace rmod
