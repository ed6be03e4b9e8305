#pragma once

#include <cmath>
#include <cstdint>

namespace gagt {

// splitmix64 (Vigna 2015). Every run owns exactly one stream and draws from
// it in a fixed, documented order, so results are reproducible from the seed
// alone. Replica streams use consecutive seeds (base seed + replica index).
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t operator()() { return next(); }

    // Uniform integer in [0, n). Multiply-shift; bias is O(n / 2^64).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1]; safe as a log() argument.
    double uniform01_open() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller; consumes exactly two raw draws.
    double normal() {
        double radius = std::sqrt(-2.0 * std::log(uniform01_open()));
        double angle = 6.28318530717958647692 * uniform01();
        return radius * std::cos(angle);
    }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ull; }

private:
    std::uint64_t state_;
};

} // namespace gagt
