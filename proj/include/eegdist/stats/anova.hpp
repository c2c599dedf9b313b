#pragma once

// Nested-model F test, one-way ANOVA, Tukey-Kramer HSD and the two-sample z test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../metrics.hpp"
#include "distributions.hpp"
#include "ols.hpp"

namespace eegdist::stats {

struct NestedAnova {
    double rss_full = 0.0;
    double rss_reduced = 0.0;
    std::size_t df_full = 0;
    std::size_t df_reduced = 0;
    double sum_sq = 0.0; // rss_reduced - rss_full
    double f = 0.0;
    double p = 1.0;
    std::vector<std::string> dropped_terms;
};

// F test of `reduced` against `full`; both must be fitted to the same response.
inline NestedAnova nested_anova(const RegressionFit& full, const RegressionFit& reduced) {
    for (const auto& term : reduced.term_names)
        if (!full.index_of(term)) throw InvalidArgument("nested_anova: term '" + term + "' is not in the full model");
    if (full.n != reduced.n) throw InvalidArgument("nested_anova: models were fitted to different sample sizes");
    if (std::abs(full.tss - reduced.tss) > 1e-9 * std::max(full.tss, 1e-300))
        throw InvalidArgument("nested_anova: models were fitted to different responses");

    NestedAnova out;
    out.rss_full = full.rss;
    out.rss_reduced = reduced.rss;
    out.df_full = full.df_residual;
    out.df_reduced = reduced.df_residual;
    for (const auto& term : full.term_names)
        if (!reduced.index_of(term)) out.dropped_terms.push_back(term);

    if (out.dropped_terms.empty()) return out; // identical models: F = 0, p = 1
    if (out.df_reduced <= out.df_full) throw InvalidArgument("nested_anova: reduced model must have fewer terms");

    const double tol = 1e-9 * std::max(full.rss, full.tss * 1e-12);
    out.sum_sq = reduced.rss - full.rss;
    if (out.sum_sq < -tol) throw InvalidArgument("nested_anova: reduced model fits better than the full model");
    out.sum_sq = std::max(out.sum_sq, 0.0);
    const double ddf = static_cast<double>(out.df_reduced - out.df_full);
    const double dff = static_cast<double>(out.df_full);
    if (full.rss > 0.0) {
        out.f = (out.sum_sq / ddf) / (full.rss / dff);
        out.p = f_sf(out.f, ddf, dff);
    } else {
        out.f = out.sum_sq > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        out.p = out.sum_sq > 0.0 ? 0.0 : 1.0;
    }
    return out;
}

struct Group {
    std::string name;
    std::vector<double> values;
};

struct OneWayAnova {
    std::size_t k = 0;
    std::vector<std::string> group_names;
    std::vector<std::size_t> group_sizes;
    std::vector<double> group_means;
    std::size_t df_between = 0;
    double ss_between = 0.0;
    double ms_between = 0.0;
    std::size_t df_within = 0;
    double ss_within = 0.0;
    double ms_within = 0.0;
    double f = 0.0;
    double p = 1.0;
};

inline OneWayAnova one_way_anova(std::span<const Group> groups) {
    if (groups.size() < 2) throw InvalidArgument("one_way_anova: need at least 2 groups");
    OneWayAnova out;
    out.k = groups.size();
    CompensatedSum grand;
    std::size_t total_n = 0;
    for (const auto& g : groups) {
        if (g.values.size() < 2)
            throw InvalidArgument("one_way_anova: group '" + g.name + "' has fewer than 2 observations");
        CompensatedSum s;
        for (double v : g.values) {
            if (!std::isfinite(v)) throw InvalidArgument("one_way_anova: non-finite value in group '" + g.name + "'");
            s.add(v);
            grand.add(v);
        }
        out.group_names.push_back(g.name);
        out.group_sizes.push_back(g.values.size());
        out.group_means.push_back(s.value() / static_cast<double>(g.values.size()));
        total_n += g.values.size();
    }
    const double grand_mean = grand.value() / static_cast<double>(total_n);
    CompensatedSum between;
    CompensatedSum within;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double dm = out.group_means[i] - grand_mean;
        between.add(static_cast<double>(out.group_sizes[i]) * dm * dm);
        for (double v : groups[i].values) within.add((v - out.group_means[i]) * (v - out.group_means[i]));
    }
    out.ss_between = between.value();
    out.ss_within = within.value();
    if (!(out.ss_between + out.ss_within > 0.0))
        throw InvalidArgument("one_way_anova: all observations are identical, F is undefined");
    out.df_between = out.k - 1;
    out.df_within = total_n - out.k;
    out.ms_between = out.ss_between / static_cast<double>(out.df_between);
    out.ms_within = out.ss_within / static_cast<double>(out.df_within);
    if (out.ms_within > 0.0) {
        out.f = out.ms_between / out.ms_within;
        out.p = f_sf(out.f, static_cast<double>(out.df_between), static_cast<double>(out.df_within));
    } else {
        out.f = std::numeric_limits<double>::infinity();
        out.p = 0.0;
    }
    return out;
}

struct TukeyPair {
    std::size_t first = 0;  // group index i
    std::size_t second = 0; // group index j; diff = mean_i - mean_j
    std::string label;      // "name_i-name_j"
    double diff = 0.0;
    double lwr = 0.0;
    double upr = 0.0;
    double p_adj = 1.0;
};

struct TukeyResult {
    double conf_level = 0.95;
    double q_critical = 0.0;
    double ms_within = 0.0;
    std::size_t df_within = 0;
    std::vector<TukeyPair> pairs;
};

// Tukey-Kramer honest significant differences. Pairs follow R's order:
// (2-1, 3-1, ..., k-1, 3-2, ...), each diff = mean of the later group minus the earlier one.
inline TukeyResult tukey_hsd(std::span<const Group> groups, double conf_level = 0.95) {
    if (!(conf_level > 0.0 && conf_level < 1.0)) throw InvalidArgument("tukey_hsd: confidence must lie in (0, 1)");
    const OneWayAnova aov = one_way_anova(groups);
    if (!(aov.ms_within > 0.0)) throw InvalidArgument("tukey_hsd: zero within-group variance");
    TukeyResult out;
    out.conf_level = conf_level;
    out.ms_within = aov.ms_within;
    out.df_within = aov.df_within;
    const int k = static_cast<int>(aov.k);
    const double df = static_cast<double>(aov.df_within);
    out.q_critical = studentized_range_quantile(conf_level, k, df);
    for (std::size_t j = 0; j < aov.k; ++j) {
        for (std::size_t i = j + 1; i < aov.k; ++i) {
            TukeyPair pr;
            pr.first = i;
            pr.second = j;
            pr.label = aov.group_names[i] + "-" + aov.group_names[j];
            pr.diff = aov.group_means[i] - aov.group_means[j];
            const double se = std::sqrt(aov.ms_within * 0.5 *
                                        (1.0 / static_cast<double>(aov.group_sizes[i]) +
                                         1.0 / static_cast<double>(aov.group_sizes[j])));
            pr.lwr = pr.diff - out.q_critical * se;
            pr.upr = pr.diff + out.q_critical * se;
            pr.p_adj = std::clamp(1.0 - studentized_range_cdf(std::abs(pr.diff) / se, k, df), 0.0, 1.0);
            out.pairs.push_back(std::move(pr));
        }
    }
    return out;
}

struct ZTestResult {
    double z = 0.0;
    double alpha = 1.0; // two-sided type I error
};

// z = (mean2 - mean1) / sqrt(sd1^2/n1 + sd2^2/n2); alpha = 2 (1 - Phi(|z|)).
inline ZTestResult two_sample_ztest(double mean1, double sd1, std::size_t n1, double mean2, double sd2,
                                    std::size_t n2) {
    if (n1 < 2 || n2 < 2) throw InvalidArgument("two_sample_ztest: each sample needs n >= 2");
    if (!(sd1 > 0.0 && sd2 > 0.0)) throw InvalidArgument("two_sample_ztest: standard deviations must be positive");
    if (!std::isfinite(mean1) || !std::isfinite(mean2)) throw InvalidArgument("two_sample_ztest: non-finite mean");
    ZTestResult out;
    out.z = (mean2 - mean1) / std::sqrt(sd1 * sd1 / static_cast<double>(n1) + sd2 * sd2 / static_cast<double>(n2));
    out.alpha = std::min(1.0, 2.0 * normal_sf(std::abs(out.z)));
    return out;
}

} // namespace eegdist::stats
