#pragma once

#include <cstdint>

namespace rmod {

/// SplitMix64 finalizer. Used both as the stream's output stage and for
/// deriving per-signal seeds.
std::uint64_t mix64(std::uint64_t x);

/// Per-signal seed from (master seed, class ordinal, record index).
/// Order-independent, so records can be generated in parallel and still
/// come out identical to a serial run.
std::uint64_t stable_mix(std::uint64_t master_seed, std::uint64_t class_ordinal,
                         std::uint64_t index);

// Deterministic random stream: SplitMix64 for uniforms, Box-Muller
// (trigonometric form) for Gaussians. The algorithm is part of the dataset
// format contract; a dataset regenerates bit-identically from its seeds.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    /// Uniform in [0, 1) with 53-bit resolution.
    double next_unit();

    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi);

    /// Gaussian with mean 0 and the given standard deviation.
    double next_gaussian(double sigma);

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0; // second Box-Muller output, unit variance
};

} // namespace rmod
