#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "error.hpp"

namespace eegdist {

// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double sum_of_squares(std::span<const double> v) noexcept {
    CompensatedSum s;
    for (double x : v) s.add(x * x);
    return s.value();
}

inline double l2_norm(std::span<const double> v) noexcept { return std::sqrt(sum_of_squares(v)); }

// Percentage root-mean-square difference: ||x - xr|| / ||x|| * 100.
inline double prd(std::span<const double> original, std::span<const double> reconstructed) {
    if (original.size() != reconstructed.size())
        throw InvalidArgument("prd: length mismatch (" + std::to_string(original.size()) + " vs " +
                              std::to_string(reconstructed.size()) + ")");
    CompensatedSum diff;
    CompensatedSum ref;
    for (std::size_t i = 0; i < original.size(); ++i) {
        const double d = original[i] - reconstructed[i];
        diff.add(d * d);
        ref.add(original[i] * original[i]);
    }
    if (!(ref.value() > 0.0)) throw InvalidArgument("prd: original signal has zero energy");
    return std::sqrt(diff.value() / ref.value()) * 100.0;
}

// Percentage of DWT coefficients discarded: (1 - m/ns) * 100.
inline double compression_ratio(std::size_t m, std::size_t ns) {
    if (m < 1 || m > ns)
        throw InvalidArgument("compression_ratio: need 1 <= m <= ns (m=" + std::to_string(m) +
                              ", ns=" + std::to_string(ns) + ")");
    return (1.0 - static_cast<double>(m) / static_cast<double>(ns)) * 100.0;
}

enum class LogBase { Ten, Natural };

constexpr double log_base_value(LogBase b) noexcept { return b == LogBase::Ten ? 10.0 : 2.718281828459045; }

inline double log_distortion(double ds, LogBase base = LogBase::Ten) {
    if (!(ds > 0.0) || !std::isfinite(ds))
        throw InvalidArgument("log_distortion: distortion must be positive and finite");
    return base == LogBase::Ten ? std::log10(ds) : std::log(ds);
}

inline double exp_distortion(double d, LogBase base = LogBase::Ten) {
    return base == LogBase::Ten ? std::pow(10.0, d) : std::exp(d);
}

} // namespace eegdist
