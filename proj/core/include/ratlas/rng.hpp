#pragma once

#include <cmath>
#include <cstdint>

namespace ratlas {

/// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: every variate is a pure function of
/// (seed, stream, index), so parallel generation is order-independent and
/// a prefix of a stream never depends on how later draws are scheduled.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t stream, std::uint64_t index, std::uint64_t lane = 0) const {
        return mix64(mix64(mix64(seed_ ^ 0x5bf0f3a4b9c4e2d1ULL) ^ stream) ^ (index * 2 + lane));
    }

    /// Uniform in (0, 1]: 53-bit mantissa, never exactly zero.
    double u01(std::uint64_t stream, std::uint64_t index, std::uint64_t lane = 0) const {
        return static_cast<double>((bits(stream, index, lane) >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi, std::uint64_t stream, std::uint64_t index) const {
        return lo + (hi - lo) * u01(stream, index, 0);
    }

    /// Standard normal via Box-Muller on the two lanes of one counter.
    double normal(std::uint64_t stream, std::uint64_t index) const {
        const double u1 = u01(stream, index, 0);
        const double u2 = u01(stream, index, 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace ratlas
