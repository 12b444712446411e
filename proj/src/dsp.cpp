#include "rmod/dsp.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>
#include <utility>

#include "rmod/errors.hpp"

namespace rmod {

namespace {

std::vector<std::size_t> factorize(std::size_t n) {
    std::vector<std::size_t> factors;
    for (std::size_t p = 2; p * p <= n;) {
        if (n % p == 0) {
            factors.push_back(p);
            n /= p;
        } else {
            ++p;
        }
    }
    if (n > 1) factors.push_back(n);
    return factors;
}

Fft& plan_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, Fft> plans;
    auto it = plans.find(n);
    if (it == plans.end()) it = plans.emplace(n, Fft(n)).first;
    return it->second;
}

} // namespace

const char* to_string(WindowFn fn) {
    return fn == WindowFn::Hann ? "hann" : "rectangular";
}

WindowFn window_fn_from_string(std::string_view name) {
    if (name == "hann") return WindowFn::Hann;
    if (name == "rectangular") return WindowFn::Rectangular;
    throw ValidationError("unknown window function: " + std::string(name));
}

std::size_t StftConfig::frame_count(std::size_t n) const {
    validate();
    if (n < window_len)
        throw ValidationError("stft: input shorter than window");
    return (n - window_len) / hop + 1;
}

void StftConfig::validate() const {
    if (window_len == 0) throw ValidationError("stft: window_len must be positive");
    if (hop == 0 || hop > window_len)
        throw ValidationError("stft: hop must satisfy 1 <= hop <= window_len");
}

std::string StftConfig::canonical_string() const {
    return "window_len=" + std::to_string(window_len) +
           ",hop=" + std::to_string(hop) +
           ",window=" + to_string(window_fn);
}

Spectrogram::Spectrogram(std::size_t bins, std::size_t frames, StftConfig config)
    : bins_(bins), frames_(frames), config_(config), data_(bins * frames) {}

Fft::Fft(std::size_t n) : n_(n), factors_(factorize(n)) {
    if (n == 0) throw ValidationError("dft: length must be >= 1");
    twiddles_.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        twiddles_[k] = std::polar(1.0, -2.0 * std::numbers::pi *
                                           static_cast<double>(k) / static_cast<double>(n));
    scratch_.resize(n * (factors_.size() + 1));
}

void Fft::transform(const cdouble* in, std::size_t stride, cdouble* out,
                    std::size_t n, std::size_t level, bool inverse_pass) {
    if (n == 1) {
        out[0] = in[0];
        return;
    }
    const std::size_t p = factors_[level];
    const std::size_t m = n / p;
    const std::size_t tw_stride = n_ / n;
    if (m == 1) {
        // prime length: direct transform
        for (std::size_t k = 0; k < n; ++k) {
            cdouble acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                cdouble w = twiddles_[(j * k % n) * tw_stride];
                if (inverse_pass) w = std::conj(w);
                acc += w * in[j * stride];
            }
            out[k] = acc;
        }
        return;
    }
    cdouble* sub = scratch_.data() + level * n_;
    for (std::size_t r = 0; r < p; ++r)
        transform(in + r * stride, stride * p, sub + r * m, m, level + 1, inverse_pass);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t km = k % m;
        cdouble acc = 0.0;
        for (std::size_t r = 0; r < p; ++r) {
            cdouble w = twiddles_[(r * k % n) * tw_stride];
            if (inverse_pass) w = std::conj(w);
            acc += w * sub[r * m + km];
        }
        out[k] = acc;
    }
}

void Fft::forward(std::span<const cdouble> in, std::span<cdouble> out) {
    if (in.size() != n_ || out.size() != n_)
        throw ValidationError("dft: buffer size does not match plan");
    transform(in.data(), 1, out.data(), n_, 0, false);
}

void Fft::inverse(std::span<const cdouble> in, std::span<cdouble> out) {
    if (in.size() != n_ || out.size() != n_)
        throw ValidationError("dft: buffer size does not match plan");
    transform(in.data(), 1, out.data(), n_, 0, true);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : out) v *= scale;
}

std::vector<cdouble> dft(std::span<const cdouble> values) {
    if (values.empty()) throw ValidationError("dft: length must be >= 1");
    std::vector<cdouble> out(values.size());
    plan_for(values.size()).forward(values, out);
    return out;
}

std::vector<cdouble> idft(std::span<const cdouble> values) {
    if (values.empty()) throw ValidationError("idft: length must be >= 1");
    std::vector<cdouble> out(values.size());
    plan_for(values.size()).inverse(values, out);
    return out;
}

std::vector<double> make_window(WindowFn fn, std::size_t len) {
    std::vector<double> w(len, 1.0);
    if (fn == WindowFn::Hann) {
        // periodic Hann
        for (std::size_t k = 0; k < len; ++k)
            w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                        static_cast<double>(k) / static_cast<double>(len));
    }
    return w;
}

ComplexSeries analytic_signal(std::span<const double> signal, double sample_rate_hz) {
    const std::size_t n = signal.size();
    if (n < 2) throw ValidationError("analytic_signal: need at least 2 samples");
    std::vector<cdouble> buf(signal.begin(), signal.end());
    std::vector<cdouble> spectrum = dft(buf);
    // keep DC (and Nyquist when even), double positive bins, zero negative bins
    const std::size_t half = n / 2;
    const std::size_t pos_end = (n % 2 == 0) ? half : half + 1;
    for (std::size_t k = 1; k < pos_end; ++k) spectrum[k] *= 2.0;
    for (std::size_t k = (n % 2 == 0) ? half + 1 : pos_end; k < n; ++k) spectrum[k] = 0.0;
    return {idft(spectrum), sample_rate_hz};
}

Envelope envelope_hilbert(std::span<const double> signal) {
    ComplexSeries series = analytic_signal(signal);
    Envelope env;
    env.source = EnvelopeSource::Hilbert;
    env.values.reserve(series.values.size());
    for (const cdouble& v : series.values) env.values.push_back(std::abs(v));
    return env;
}

Spectrogram stft(const ComplexSeries& series, const StftConfig& config) {
    const std::size_t frames = config.frame_count(series.values.size());
    const std::vector<double> window = make_window(config.window_fn, config.window_len);
    Fft plan(config.window_len);
    Spectrogram out(config.window_len, frames, config);
    std::vector<cdouble> frame(config.window_len);
    std::vector<cdouble> bins(config.window_len);
    for (std::size_t t = 0; t < frames; ++t) {
        const cdouble* src = series.values.data() + t * config.hop;
        for (std::size_t k = 0; k < config.window_len; ++k) frame[k] = src[k] * window[k];
        plan.forward(frame, bins);
        for (std::size_t f = 0; f < config.window_len; ++f) out.at(f, t) = bins[f];
    }
    return out;
}

Envelope envelope_stft(std::span<const double> signal, const StftConfig& config) {
    const Spectrogram spec = stft(analytic_signal(signal), config);
    Envelope env;
    env.source = EnvelopeSource::Stft;
    env.values.assign(spec.frames(), 0.0);
    for (std::size_t f = 0; f < spec.bins(); ++f)
        for (std::size_t t = 0; t < spec.frames(); ++t)
            env.values[t] += std::abs(spec.at(f, t));
    return env;
}

} // namespace rmod
