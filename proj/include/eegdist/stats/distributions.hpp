#pragma once

// CDFs and upper tails for the normal, Student t, Fisher F and studentized
// range distributions. t and F go through the regularized incomplete beta
// function (modified Lentz continued fraction); the studentized range is a
// double integral evaluated with adaptive Gauss-Kronrod.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "../error.hpp"
#include "quadrature.hpp"

namespace eegdist::stats {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }
inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

namespace detail {

inline double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 20000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

inline void check_df(double df, const char* what) {
    if (!(df >= 1.0)) throw InvalidArgument(std::string(what) + ": degrees of freedom must be >= 1");
}

} // namespace detail

// {I_x(a, b), 1 - I_x(a, b)} with y = 1 - x supplied separately so that both
// tails keep full relative precision. The smaller tail is computed directly.
inline std::pair<double, double> incomplete_beta(double a, double b, double x, double y) {
    if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("incomplete_beta: shape parameters must be positive");
    if (x <= 0.0) return {0.0, 1.0};
    if (y <= 0.0) return {1.0, 0.0};
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lower = std::clamp(front * detail::beta_continued_fraction(a, b, x) / a, 0.0, 1.0);
        return {lower, 1.0 - lower};
    }
    const double upper = std::clamp(front * detail::beta_continued_fraction(b, a, y) / b, 0.0, 1.0);
    return {1.0 - upper, upper};
}

inline double incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x).first; }

namespace detail {

// {P(T <= -|t|), P(T > -|t|)}
inline std::pair<double, double> t_tails(double t, double df) {
    check_df(df, "t distribution");
    if (std::isinf(t)) return {0.0, 1.0};
    const double t2 = t * t;
    const double denom = df + t2;
    // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
    const auto [two_tail, inner] = incomplete_beta(0.5 * df, 0.5, df / denom, t2 / denom);
    return {0.5 * two_tail, 1.0 - 0.5 * two_tail};
}

} // namespace detail

inline double t_cdf(double t, double df) {
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    const auto [small, large] = detail::t_tails(t, df);
    return t < 0.0 ? small : large;
}

inline double t_sf(double t, double df) {
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    const auto [small, large] = detail::t_tails(t, df);
    return t < 0.0 ? large : small;
}

// Two-sided p-value for a t statistic.
inline double t_two_sided_p(double t, double df) { return std::min(1.0, 2.0 * t_sf(std::abs(t), df)); }

inline double f_cdf(double f, double d1, double d2) {
    detail::check_df(d1, "F distribution");
    detail::check_df(d2, "F distribution");
    if (!(f > 0.0)) return 0.0;
    if (std::isinf(f)) return 1.0;
    const double denom = d1 * f + d2;
    return incomplete_beta(0.5 * d1, 0.5 * d2, d1 * f / denom, d2 / denom).first;
}

inline double f_sf(double f, double d1, double d2) {
    detail::check_df(d1, "F distribution");
    detail::check_df(d2, "F distribution");
    if (!(f > 0.0)) return 1.0;
    if (std::isinf(f)) return 0.0;
    const double denom = d1 * f + d2;
    return incomplete_beta(0.5 * d1, 0.5 * d2, d1 * f / denom, d2 / denom).second;
}

namespace detail {

// Phi(b) - Phi(a) for a <= b, evaluated on the side that avoids cancellation.
inline double normal_interval(double a, double b) {
    return a > 0.0 ? normal_sf(a) - normal_sf(b) : normal_cdf(b) - normal_cdf(a);
}

// P(range of k iid standard normals <= w).
inline double normal_range_cdf(double w, int k) {
    if (!(w > 0.0)) return 0.0;
    const double km1 = k - 1.0;
    auto integrand = [w, k, km1](double z) {
        const double inside = normal_interval(z, z + w);
        return inside > 0.0 ? k * normal_pdf(z) * std::pow(inside, km1) : 0.0;
    };
    // The minimum of k normals lies in [-9, 9] up to ~1e-18 probability.
    const double upper = 9.0;
    const double lower = -9.0;
    auto r = integrate(integrand, lower, upper, 1e-13, 1e-13, 8);
    return std::clamp(r.value, 0.0, 1.0);
}

} // namespace detail

// P(Q <= q) for the studentized range of k means with df error degrees of
// freedom. df = +infinity gives the range of standard normals.
inline double studentized_range_cdf(double q, int k, double df) {
    if (k < 2) throw InvalidArgument("studentized range: k must be >= 2");
    if (!(df >= 1.0)) throw InvalidArgument("studentized range: degrees of freedom must be >= 1");
    if (!(q > 0.0)) return 0.0;
    if (std::isinf(q)) return 1.0;
    if (std::isinf(df) || df > 1e7) return detail::normal_range_cdf(q, k);

    // Scale s = sqrt(chi2_df / df) has log density:
    const double half = 0.5 * df;
    const double log_norm = std::log(2.0) + half * std::log(half) - std::lgamma(half);
    auto log_density = [&](double s) { return log_norm + (df - 1.0) * std::log(s) - half * s * s; };

    const double mode = std::sqrt(std::max(df - 1.0, 0.0) / df);
    const double spread = 1.0 / std::sqrt(2.0 * df);
    const double peak = mode > 0.0 ? log_density(mode) : log_density(spread);
    constexpr double kCut = 46.0; // e^-46 ~ 1e-20 relative to the peak
    double hi = std::max(mode, spread);
    while (log_density(hi) > peak - kCut) hi += spread;
    double lo = mode;
    while (lo > 0.0 && log_density(lo) > peak - kCut) lo = std::max(0.0, lo - spread);

    auto integrand = [&](double s) {
        if (!(s > 0.0)) return 0.0;
        return std::exp(log_density(s)) * detail::normal_range_cdf(q * s, k);
    };
    auto r = integrate(integrand, lo, hi, 1e-11, 1e-11, 8);
    return std::clamp(r.value, 0.0, 1.0);
}

// Quantile of the studentized range: smallest q with CDF(q) >= p.
inline double studentized_range_quantile(double p, int k, double df) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("studentized range quantile: p must lie in (0, 1)");
    double lo = 0.0;
    double flo = -p;
    double hi = 1.0;
    double fhi = studentized_range_cdf(hi, k, df) - p;
    while (fhi < 0.0) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        fhi = studentized_range_cdf(hi, k, df) - p;
    }
    // Illinois regula falsi.
    int side = 0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-10 * std::max(1.0, hi); ++iter) {
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double fx = studentized_range_cdf(x, k, df) - p;
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace eegdist::stats
