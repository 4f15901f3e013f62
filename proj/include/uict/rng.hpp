#ifndef UICT_RNG_HPP
#define UICT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace uict {

// SplitMix64 (Vigna 2015). One multiply-xorshift finalizer per draw; passes
// BigCrush and is cheap enough for chain stepping at ~1e9 draws per run.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Independent reproducible stream: one per trajectory/path index.
/// Streams are decorrelated by hashing (seed, index) into the generator state,
/// so results do not depend on which thread runs which index.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index)
        : gen_(mix64(seed ^ 0x8000000000000000ull) +
               mix64(stream_index * 0x9E3779B97F4A7C15ull + 0x1ull)) {}

    std::uint64_t next_u64() { return gen_.next_u64(); }
    double uniform() { return gen_.next_double(); }

    // Standard normal via the polar method; second deviate cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * gen_.next_double() - 1.0;
            v = 2.0 * gen_.next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

private:
    SplitMix64 gen_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace uict

#endif
