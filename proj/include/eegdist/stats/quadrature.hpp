#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod integration: the panel with the
// largest error estimate is bisected until the summed estimate meets the
// tolerance or the panel budget runs out.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace eegdist::stats {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kKronrodNodes[i];
        const double s = f(c - dx) + f(c + dx);
        kronrod += kKronrodWeights[i] * s;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * s;
    }
    return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

} // namespace detail

template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-12,
                           int initial_panels = 1, int max_panels = 4000) {
    std::priority_queue<detail::Panel> heap;
    double total = 0.0;
    double err = 0.0;
    const int n0 = std::max(initial_panels, 1);
    for (int i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * i / n0;
        const double hi = i + 1 == n0 ? b : a + (b - a) * (i + 1) / n0;
        auto p = detail::gk15(f, lo, hi);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int panels = n0;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && panels < max_panels) {
        const detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto l = detail::gk15(f, worst.a, mid);
        auto r = detail::gk15(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++panels;
    }
    // Re-sum to shed drift from the running updates.
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {total, err};
}

} // namespace eegdist::stats
