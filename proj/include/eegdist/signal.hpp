#pragma once

// Signal container, ASCII ingestion and the synthetic EEG generator.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace eegdist {

// Sampling rate of the public Bonn epilepsy segments.
inline constexpr double kDefaultSamplingRate = 173.61;

// Finite sequence of EEG amplitudes (microvolts). Holds at least two finite samples.
class Signal {
public:
    explicit Signal(std::vector<double> samples, double sampling_rate = kDefaultSamplingRate)
        : samples_(std::move(samples)), rate_(sampling_rate) {
        if (samples_.size() < 2) throw InvalidArgument("signal needs at least 2 samples");
        if (!(rate_ > 0.0) || !std::isfinite(rate_)) throw InvalidArgument("sampling rate must be positive");
        for (std::size_t i = 0; i < samples_.size(); ++i)
            if (!std::isfinite(samples_[i]))
                throw InvalidArgument("signal sample " + std::to_string(i) + " is not finite");
    }

    std::size_t size() const noexcept { return samples_.size(); }
    double sampling_rate() const noexcept { return rate_; }
    std::span<const double> samples() const noexcept { return samples_; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

    friend bool operator==(const Signal&, const Signal&) = default;

private:
    std::vector<double> samples_;
    double rate_;
};

// One amplitude per line, integer or decimal, blank lines ignored.
inline Signal load_ascii_signal(const std::string& path, double sampling_rate = kDefaultSamplingRate) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open signal file '" + path + "'");
    std::vector<double> samples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty()) continue;
        double v = 0.0;
        if (!detail::parse_double(t, v) || !std::isfinite(v))
            throw ParseError("'" + path + "': cannot parse '" + std::string(t) + "' as a number", lineno);
        samples.push_back(v);
    }
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    if (samples.size() < 2)
        throw ParseError("'" + path + "': need at least 2 samples, found " + std::to_string(samples.size()), 0);
    return Signal(std::move(samples), sampling_rate);
}

inline void write_ascii_signal(const Signal& signal, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    for (double v : signal.samples()) out << detail::format_double(v) << '\n';
    if (!out) throw IoError("write failure on '" + path + "'");
}

// Deterministic pseudo-EEG: four band sinusoids (delta 2 Hz, theta 6 Hz,
// alpha 10 Hz, beta 20 Hz) with seed-dependent phases, plus pink noise at 20%
// of the sinusoid power, scaled so the peak magnitude is 100 uV.
inline Signal synth_eeg(std::uint64_t seed, std::size_t ns, double sampling_rate = kDefaultSamplingRate) {
    if (ns < 2) throw InvalidArgument("synth_eeg: ns must be >= 2");
    if (!(sampling_rate > 0.0)) throw InvalidArgument("synth_eeg: sampling rate must be positive");

    constexpr std::array<double, 4> freqs{2.0, 6.0, 10.0, 20.0};
    constexpr std::array<double, 4> amps{1.0, 0.6, 0.45, 0.25};
    constexpr double noise_power_ratio = 0.2;

    Rng rng(mix_seed({0x5EE6ull, seed}));
    std::array<double, 4> phase{};
    for (double& p : phase) p = 2.0 * std::numbers::pi * rng.uniform();

    std::vector<double> x(ns, 0.0);
    double tone_power = 0.0;
    for (std::size_t n = 0; n < ns; ++n) {
        const double t = static_cast<double>(n) / sampling_rate;
        double v = 0.0;
        for (std::size_t b = 0; b < freqs.size(); ++b)
            v += amps[b] * std::sin(2.0 * std::numbers::pi * freqs[b] * t + phase[b]);
        x[n] = v;
        tone_power += v * v;
    }
    tone_power /= static_cast<double>(ns);

    // Paul Kellet's pink filter on white Gaussian input.
    std::vector<double> pink(ns);
    double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
    double pink_power = 0.0;
    for (std::size_t n = 0; n < ns; ++n) {
        const double w = rng.normal();
        b0 = 0.99886 * b0 + w * 0.0555179;
        b1 = 0.99332 * b1 + w * 0.0750759;
        b2 = 0.96900 * b2 + w * 0.1538520;
        b3 = 0.86650 * b3 + w * 0.3104856;
        b4 = 0.55000 * b4 + w * 0.5329522;
        b5 = -0.7616 * b5 - w * 0.0168980;
        pink[n] = b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362;
        b6 = w * 0.115926;
        pink_power += pink[n] * pink[n];
    }
    pink_power /= static_cast<double>(ns);
    const double gain = pink_power > 0.0 ? std::sqrt(noise_power_ratio * tone_power / pink_power) : 0.0;
    for (std::size_t n = 0; n < ns; ++n) x[n] += gain * pink[n];

    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    if (peak > 0.0)
        for (double& v : x) v *= 100.0 / peak;
    return Signal(std::move(x), sampling_rate);
}

} // namespace eegdist
