#pragma once

// Orthonormal multi-level DWT with periodic extension.
//
// Coefficients use the flat Mallat layout: for a signal of length ns and J
// levels, [0, ns/2^J) is the level-J approximation and [ns/2^j, ns/2^(j-1))
// holds the level-j details, so the coarsest bands come first.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "daubechies_taps.hpp"
#include "error.hpp"
#include "signal.hpp"

namespace eegdist {

inline constexpr int kDefaultLevels = 5;

struct WaveletSpec {
    int filter_length = 8;
    int levels = kDefaultLevels;

    void validate() const {
        if (filter_length < 2 || filter_length > 20 || filter_length % 2 != 0)
            throw InvalidArgument("unsupported filter length " + std::to_string(filter_length) +
                                  " (expected an even value in 2..20)");
        if (levels < 1 || levels > 30) throw InvalidArgument("levels must be >= 1, got " + std::to_string(levels));
    }

    void validate_length(std::size_t ns) const {
        validate();
        const std::size_t block = std::size_t{1} << levels;
        if (ns < block || ns % block != 0)
            throw InvalidArgument("signal length " + std::to_string(ns) + " is not divisible by 2^" +
                                  std::to_string(levels));
    }

    friend bool operator==(const WaveletSpec&, const WaveletSpec&) = default;
};

// Low-pass (scaling) filter of the Daubechies wavelet with the given length.
inline std::vector<double> daubechies_filter(int filter_length) {
    WaveletSpec{filter_length, 1}.validate();
    auto taps = detail::daubechies_taps(filter_length);
    return {taps.begin(), taps.end()};
}

// Quadrature-mirror high-pass: g[k] = (-1)^k h[F-1-k].
inline std::vector<double> qmf_highpass(std::span<const double> lowpass) {
    const std::size_t f = lowpass.size();
    std::vector<double> g(f);
    for (std::size_t k = 0; k < f; ++k) g[k] = (k % 2 ? -1.0 : 1.0) * lowpass[f - 1 - k];
    return g;
}

struct CoefficientSet {
    std::vector<double> values;          // flat Mallat layout, size ns
    std::vector<std::uint8_t> keep_mask; // 1 = retained
    int levels = 0;

    std::size_t ns() const noexcept { return values.size(); }

    std::size_t retained() const noexcept {
        std::size_t m = 0;
        for (auto k : keep_mask) m += k != 0;
        return m;
    }

    std::span<const double> approximation() const {
        return std::span<const double>(values).first(values.size() >> levels);
    }

    // Details of level j, 1 = finest.
    std::span<const double> detail(int level) const {
        if (level < 1 || level > levels) throw InvalidArgument("detail level out of range");
        const std::size_t len = values.size() >> level;
        return std::span<const double>(values).subspan(len, len);
    }

    // values with non-retained entries zeroed.
    std::vector<double> masked() const {
        std::vector<double> out(values.size(), 0.0);
        for (std::size_t i = 0; i < values.size(); ++i)
            if (keep_mask[i]) out[i] = values[i];
        return out;
    }
};

namespace detail {

// One analysis step on x[0, n): writes approximations to a[0, n/2) and details to d[0, n/2).
inline void analysis_step(std::span<const double> x, std::span<const double> h, std::span<const double> g,
                          std::span<double> a, std::span<double> d) {
    const std::size_t n = x.size();
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double sa = 0.0;
        double sd = 0.0;
        std::size_t idx = (2 * i) % n;
        for (std::size_t k = 0; k < h.size(); ++k) {
            sa += h[k] * x[idx];
            sd += g[k] * x[idx];
            if (++idx == n) idx = 0;
        }
        a[i] = sa;
        d[i] = sd;
    }
}

// Adjoint of analysis_step: accumulates the synthesis into x[0, 2*a.size()).
inline void synthesis_step(std::span<const double> a, std::span<const double> d, std::span<const double> h,
                           std::span<const double> g, std::span<double> x) {
    const std::size_t n = x.size();
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::size_t idx = (2 * i) % n;
        for (std::size_t k = 0; k < h.size(); ++k) {
            x[idx] += h[k] * a[i] + g[k] * d[i];
            if (++idx == n) idx = 0;
        }
    }
}

} // namespace detail

inline CoefficientSet dwt(std::span<const double> signal, const WaveletSpec& spec) {
    spec.validate_length(signal.size());
    const auto h = detail::daubechies_taps(spec.filter_length);
    const auto g = qmf_highpass(h);

    const std::size_t ns = signal.size();
    CoefficientSet out;
    out.levels = spec.levels;
    out.values.assign(signal.begin(), signal.end());
    out.keep_mask.assign(ns, 1);

    std::vector<double> work(ns);
    for (int j = 1; j <= spec.levels; ++j) {
        const std::size_t n = ns >> (j - 1);
        const std::size_t half = n / 2;
        std::span<double> values(out.values);
        std::copy_n(values.begin(), n, work.begin());
        detail::analysis_step(std::span<const double>(work).first(n), h, g, values.first(half),
                              values.subspan(half, half));
    }
    return out;
}

inline CoefficientSet dwt(const Signal& signal, const WaveletSpec& spec) { return dwt(signal.samples(), spec); }

// Inverse transform of the retained coefficients (masked-out entries count as zero).
inline std::vector<double> idwt_samples(const CoefficientSet& coeffs, const WaveletSpec& spec) {
    spec.validate();
    if (coeffs.levels != spec.levels)
        throw InvalidArgument("coefficient set has " + std::to_string(coeffs.levels) + " levels, spec has " +
                              std::to_string(spec.levels));
    if (coeffs.keep_mask.size() != coeffs.values.size())
        throw InvalidArgument("keep mask size does not match coefficient count");
    spec.validate_length(coeffs.ns());

    const auto h = detail::daubechies_taps(spec.filter_length);
    const auto g = qmf_highpass(h);
    const std::size_t ns = coeffs.ns();

    std::vector<double> x = coeffs.masked();
    std::vector<double> work(ns);
    for (int j = spec.levels; j >= 1; --j) {
        const std::size_t n = ns >> (j - 1);
        const std::size_t half = n / 2;
        std::span<const double> cur(x);
        detail::synthesis_step(cur.first(half), cur.subspan(half, half), h, g, std::span<double>(work).first(n));
        std::copy_n(work.begin(), n, x.begin());
    }
    return x;
}

inline Signal idwt(const CoefficientSet& coeffs, const WaveletSpec& spec,
                   double sampling_rate = kDefaultSamplingRate) {
    return Signal(idwt_samples(coeffs, spec), sampling_rate);
}

} // namespace eegdist
