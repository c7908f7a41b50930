#include "uat/rng.hpp"

#include <cmath>
#include <numbers>

namespace uat {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed) : key_(mix64(seed + kGolden)) {}

double CounterRng::uniform(std::uint64_t counter) const {
    const std::uint64_t h = mix64(key_ ^ (counter * kGolden + 1));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
    const std::uint64_t h1 = mix64(key_ ^ (2 * counter * kGolden + 1));
    const std::uint64_t h2 = mix64(key_ ^ ((2 * counter + 1) * kGolden + 1));
    // u1 in (0, 1] so the log stays finite.
    const double u1 = static_cast<double>((h1 >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace uat
