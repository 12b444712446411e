#include "rmod/rng.hpp"

#include <cmath>
#include <numbers>

namespace rmod {

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t stable_mix(std::uint64_t master_seed, std::uint64_t class_ordinal,
                         std::uint64_t index) {
    std::uint64_t h = mix64(master_seed + 0x9e3779b97f4a7c15ULL * (class_ordinal + 1));
    return mix64(h + 0x9e3779b97f4a7c15ULL * (index + 1));
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
}

double SplitMix64::next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_uniform(double lo, double hi) {
    return lo + next_unit() * (hi - lo);
}

double SplitMix64::next_gaussian(double sigma) {
    if (have_spare_) {
        have_spare_ = false;
        return spare_ * sigma;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - next_unit();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle) * sigma;
}

} // namespace rmod
