#pragma once

// Seeding and random streams.
//
// Every random quantity in the library is drawn from std::mt19937_64, whose
// output sequence is fixed by the C++ standard, seeded through the SplitMix64
// finalizer. Uniform doubles take the top 53 bits of one engine output, and
// normal deviates use the polar-free Box-Muller form below, so streams are
// reproducible across compilers and standard libraries.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace eegdist {

// SplitMix64 output function (Steele, Lea & Flood).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Order-sensitive combination of several integers into one seed.
constexpr std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open0() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    // Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n) { return n ? static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n : 0; }

    // Standard normal, Box-Muller using both uniforms once (the sine branch is discarded).
    double normal() {
        const double u1 = uniform_open0();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace eegdist
