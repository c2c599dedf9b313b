#pragma once

// Ordinary least squares with an implicit intercept, solved by Householder QR.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "../error.hpp"
#include "../metrics.hpp"
#include "distributions.hpp"

namespace eegdist::stats {

inline constexpr const char* kInterceptName = "(Intercept)";

struct Regressor {
    std::string name;
    std::vector<double> values;
};

struct RegressionFit {
    std::vector<std::string> term_names; // "(Intercept)" first
    std::vector<double> beta;
    std::vector<double> std_error;
    std::vector<double> t_value;
    std::vector<double> p_value;
    std::vector<std::pair<double, double>> term_ranges; // observed [min, max] per term
    double residual_se = 0.0;
    std::size_t df_residual = 0;
    std::size_t n = 0;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double f_statistic = std::numeric_limits<double>::quiet_NaN();
    double f_p_value = std::numeric_limits<double>::quiet_NaN();
    double rss = 0.0;
    double tss = 0.0;
    std::vector<double> residuals;
    std::string response_name = "y";
    // Base of the logarithm applied to the response, when it is a log scale.
    std::optional<double> log_base;

    std::size_t terms() const noexcept { return term_names.size(); }

    std::optional<std::size_t> index_of(const std::string& term) const {
        for (std::size_t i = 0; i < term_names.size(); ++i)
            if (term_names[i] == term) return i;
        return std::nullopt;
    }

    // Prediction for regressor values given in term order (intercept excluded).
    double predict(std::span<const double> x) const {
        if (x.size() + 1 != beta.size()) throw InvalidArgument("predict: wrong number of regressor values");
        double y = beta[0];
        for (std::size_t j = 0; j < x.size(); ++j) y += beta[j + 1] * x[j];
        return y;
    }
};

namespace detail {

// Column-major n x p matrix.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;
    double& operator()(std::size_t r, std::size_t c) { return data[c * rows + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data[c * rows + r]; }
};

} // namespace detail

inline RegressionFit ols_fit(std::span<const Regressor> regressors, std::span<const double> response,
                             std::string response_name = "y") {
    const std::size_t n = response.size();
    const std::size_t p = regressors.size() + 1;
    if (n <= p)
        throw InvalidArgument("ols_fit: need more observations (" + std::to_string(n) + ") than terms (" +
                              std::to_string(p) + ")");
    for (const auto& r : regressors)
        if (r.values.size() != n)
            throw InvalidArgument("ols_fit: regressor '" + r.name + "' has " + std::to_string(r.values.size()) +
                                  " values, response has " + std::to_string(n));
    for (double y : response)
        if (!std::isfinite(y)) throw InvalidArgument("ols_fit: response contains a non-finite value");

    RegressionFit fit;
    fit.response_name = std::move(response_name);
    fit.n = n;
    fit.term_names.push_back(kInterceptName);
    fit.term_ranges.emplace_back(1.0, 1.0);

    detail::Matrix a{n, p, std::vector<double>(n * p)};
    std::vector<double> col_norm(p);
    for (std::size_t i = 0; i < n; ++i) a(i, 0) = 1.0;
    col_norm[0] = std::sqrt(static_cast<double>(n));
    for (std::size_t j = 1; j < p; ++j) {
        const auto& reg = regressors[j - 1];
        fit.term_names.push_back(reg.name);
        double mn = std::numeric_limits<double>::infinity();
        double mx = -mn;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = reg.values[i];
            if (!std::isfinite(v)) throw InvalidArgument("ols_fit: regressor '" + reg.name + "' has a non-finite value");
            a(i, j) = v;
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        fit.term_ranges.emplace_back(mn, mx);
        col_norm[j] = l2_norm(std::span<const double>(a.data).subspan(j * n, n));
    }

    // Householder QR: R overwrites the upper triangle, Q^T is applied to qty.
    std::vector<double> qty(response.begin(), response.end());
    for (std::size_t k = 0; k < p; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (!(norm > 1e-10 * col_norm[k]) || col_norm[k] == 0.0) throw RankDeficient(fit.term_names[k]);
        const double alpha = a(k, k) > 0.0 ? -norm : norm;
        std::vector<double> v(n - k);
        for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        if (vnorm2 > 0.0) {
            for (std::size_t j = k; j < p; ++j) {
                double dot = 0.0;
                for (std::size_t i = k; i < n; ++i) dot += v[i - k] * a(i, j);
                const double s = 2.0 * dot / vnorm2;
                for (std::size_t i = k; i < n; ++i) a(i, j) -= s * v[i - k];
            }
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += v[i - k] * qty[i];
            const double s = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < n; ++i) qty[i] -= s * v[i - k];
        }
        if (!(std::abs(a(k, k)) > 1e-10 * col_norm[k])) throw RankDeficient(fit.term_names[k]);
    }

    // Back substitution R beta = (Q^T y)[0:p].
    fit.beta.assign(p, 0.0);
    for (std::size_t k = p; k-- > 0;) {
        double s = qty[k];
        for (std::size_t j = k + 1; j < p; ++j) s -= a(k, j) * fit.beta[j];
        fit.beta[k] = s / a(k, k);
    }

    // R^{-1}, upper triangular.
    std::vector<double> rinv(p * p, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        rinv[c * p + c] = 1.0 / a(c, c);
        for (std::size_t r = c; r-- > 0;) {
            double s = 0.0;
            for (std::size_t j = r + 1; j <= c; ++j) s += a(r, j) * rinv[j * p + c];
            rinv[r * p + c] = -s / a(r, r);
        }
    }

    CompensatedSum ysum;
    for (double y : response) ysum.add(y);
    const double ymean = ysum.value() / static_cast<double>(n);
    CompensatedSum rss;
    CompensatedSum tss;
    fit.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double yhat = fit.beta[0];
        for (std::size_t j = 1; j < p; ++j) yhat += fit.beta[j] * regressors[j - 1].values[i];
        const double r = response[i] - yhat;
        fit.residuals[i] = r;
        rss.add(r * r);
        tss.add((response[i] - ymean) * (response[i] - ymean));
    }
    fit.rss = rss.value();
    fit.tss = tss.value();
    if (!(fit.tss > 0.0)) throw InvalidArgument("ols_fit: response is constant");

    fit.df_residual = n - p;
    const double df = static_cast<double>(fit.df_residual);
    const double sigma2 = fit.rss / df;
    fit.residual_se = std::sqrt(sigma2);
    fit.std_error.resize(p);
    fit.t_value.resize(p);
    fit.p_value.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        double d = 0.0;
        for (std::size_t j = i; j < p; ++j) d += rinv[i * p + j] * rinv[i * p + j];
        fit.std_error[i] = std::sqrt(sigma2 * d);
        fit.t_value[i] = fit.std_error[i] > 0.0 ? fit.beta[i] / fit.std_error[i]
                                                : std::copysign(std::numeric_limits<double>::infinity(), fit.beta[i]);
        fit.p_value[i] = fit.std_error[i] > 0.0 ? t_two_sided_p(fit.t_value[i], df) : (fit.beta[i] == 0.0 ? 1.0 : 0.0);
    }

    fit.r_squared = std::clamp(1.0 - fit.rss / fit.tss, 0.0, 1.0);
    fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * static_cast<double>(n - 1) / df;
    if (p > 1) {
        const double d1 = static_cast<double>(p - 1);
        const double explained = std::max(fit.tss - fit.rss, 0.0);
        if (fit.rss > 0.0) {
            fit.f_statistic = (explained / d1) / sigma2;
            fit.f_p_value = f_sf(fit.f_statistic, d1, df);
        } else {
            fit.f_statistic = std::numeric_limits<double>::infinity();
            fit.f_p_value = 0.0;
        }
    }
    return fit;
}

} // namespace eegdist::stats
