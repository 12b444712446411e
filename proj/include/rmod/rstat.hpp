#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "rmod/dsp.hpp"
#include "rmod/siggen.hpp"

namespace rmod {

enum class RMethod { Hilbert, Stft };

const char* to_string(RMethod method);
RMethod rmethod_from_string(std::string_view name);

struct RValue {
    double value = 0.0;
    RMethod method = RMethod::Hilbert;
    std::size_t n_points = 0;
};

double mean(std::span<const double> values);

/// Population variance (divide by n). Eq-of-moments convention; fixed here
/// so R values reproduce across implementations.
double variance(std::span<const double> values);

/// Var(A) / Mean(A)^2 of an envelope. Throws DegenerateSignalError when the
/// envelope mean is zero (all-zero input).
RValue r_value(const Envelope& envelope);

/// Var/Mean^2 over every |X(f,t)| cell of a spectrogram.
RValue r_spectrogram(const Spectrogram& spectrogram);

/// hilbert: R of the Hilbert envelope. stft: R over the magnitude cells of
/// the Hilbert envelope's spectrogram. The stft route ranks a constant
/// envelope (pure spectral DC) highest, which is what inverts the class
/// ordering relative to the time-domain statistic.
RValue r_pipeline(std::span<const double> samples, RMethod method,
                  const StftConfig& stft_cfg = {});
RValue r_pipeline(const SignalRecord& record, RMethod method,
                  const StftConfig& stft_cfg = {});

} // namespace rmod
