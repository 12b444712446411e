#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rmod {

using cdouble = std::complex<double>;

/// Complex waveform plus the rate it was sampled at.
struct ComplexSeries {
    std::vector<cdouble> values;
    double sample_rate_hz = 1.0;
};

enum class WindowFn { Rectangular, Hann };

const char* to_string(WindowFn fn);
WindowFn window_fn_from_string(std::string_view name);

struct StftConfig {
    std::size_t window_len = 64;
    std::size_t hop = 16;
    WindowFn window_fn = WindowFn::Hann;

    /// floor((n - window_len) / hop) + 1; partial frames are never taken.
    std::size_t frame_count(std::size_t n) const;
    void validate() const;
    std::string canonical_string() const;
};

// Complex time-frequency matrix. Frequency-major: all frames of bin f are
// contiguous in raw(), laid out f * frames + t.
class Spectrogram {
public:
    Spectrogram(std::size_t bins, std::size_t frames, StftConfig config);

    std::size_t bins() const { return bins_; }
    std::size_t frames() const { return frames_; }
    const StftConfig& config() const { return config_; }

    cdouble& at(std::size_t f, std::size_t t) { return data_[f * frames_ + t]; }
    const cdouble& at(std::size_t f, std::size_t t) const { return data_[f * frames_ + t]; }
    std::span<const cdouble> raw() const { return data_; }

private:
    std::size_t bins_;
    std::size_t frames_;
    StftConfig config_;
    std::vector<cdouble> data_;
};

enum class EnvelopeSource { Hilbert, Stft };

/// Nonnegative amplitude sequence, one value per sample (hilbert) or per
/// frame (stft).
struct Envelope {
    std::vector<double> values;
    EnvelopeSource source = EnvelopeSource::Hilbert;
};

// Mixed-radix Cooley-Tukey DFT plan. Composite lengths factor recursively
// (200 = 2*2*2*5*5); prime factors fall back to the direct O(n*p) transform.
// Convention: unnormalized forward, 1/n inverse. A plan is cheap to build
// and not thread-safe; dft()/idft() keep one per size per thread.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }
    void forward(std::span<const cdouble> in, std::span<cdouble> out);
    void inverse(std::span<const cdouble> in, std::span<cdouble> out);

private:
    void transform(const cdouble* in, std::size_t stride, cdouble* out,
                   std::size_t n, std::size_t level, bool inverse_pass);

    std::size_t n_;
    std::vector<std::size_t> factors_;
    std::vector<cdouble> twiddles_; // exp(-2*pi*i*k/n)
    std::vector<cdouble> scratch_;  // one slice of n_ per recursion level
};

std::vector<cdouble> dft(std::span<const cdouble> values);
std::vector<cdouble> idft(std::span<const cdouble> values);

std::vector<double> make_window(WindowFn fn, std::size_t len);

/// One-sided spectrum construction: s(t) + j*H(s(t)). Re(result) == input.
ComplexSeries analytic_signal(std::span<const double> signal, double sample_rate_hz = 1.0);

/// |analytic_signal|, one value per input sample.
Envelope envelope_hilbert(std::span<const double> signal);

/// Hopped, windowed DFT of an already-complex series. Frame t covers samples
/// [t*hop, t*hop + window_len); trailing samples that do not fill a whole
/// window are dropped rather than zero-padded.
Spectrogram stft(const ComplexSeries& series, const StftConfig& config);

/// Per-frame magnitude sum of the analytic signal's spectrogram.
Envelope envelope_stft(std::span<const double> signal, const StftConfig& config);

} // namespace rmod
