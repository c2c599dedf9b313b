#pragma once

// JSON serialization and R-style text tables for statistical results.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "experiment.hpp"
#include "stats/anova.hpp"
#include "stats/ols.hpp"

namespace eegdist {

using Json = nlohmann::ordered_json;

namespace detail {

// JSON has no NaN/Inf; such values are written as null.
inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json numbers(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

inline double real_or_nan(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string pad_left(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

inline std::string pad_right(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

inline std::string significance_stars(double p) {
    if (!(p <= 1.0)) return "";
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    if (p < 0.1) return ".";
    return "";
}

} // namespace detail

// p-values under 1e-16 print as "< 1e-16"; the stored value is untouched.
inline std::string format_p(double p) {
    if (std::isnan(p)) return "NA";
    if (p < 1e-16) return "< 1e-16";
    return detail::fmt("%.4g", p);
}

inline Json to_json(const stats::RegressionFit& f) {
    Json j;
    j["response"] = f.response_name;
    j["log_base"] = f.log_base ? detail::number(*f.log_base) : Json(nullptr);
    j["term_names"] = f.term_names;
    j["beta"] = detail::numbers(f.beta);
    j["stderr"] = detail::numbers(f.std_error);
    j["t_value"] = detail::numbers(f.t_value);
    j["p_value"] = detail::numbers(f.p_value);
    Json ranges = Json::array();
    for (auto [lo, hi] : f.term_ranges) ranges.push_back({detail::number(lo), detail::number(hi)});
    j["term_ranges"] = ranges;
    j["residual_se"] = detail::number(f.residual_se);
    j["df_residual"] = f.df_residual;
    j["n"] = f.n;
    j["r_squared"] = detail::number(f.r_squared);
    j["adj_r_squared"] = detail::number(f.adj_r_squared);
    j["f_statistic"] = detail::number(f.f_statistic);
    j["f_p_value"] = detail::number(f.f_p_value);
    j["rss"] = detail::number(f.rss);
    j["tss"] = detail::number(f.tss);
    return j;
}

inline stats::RegressionFit regression_fit_from_json(const Json& j) {
    stats::RegressionFit f;
    try {
        f.response_name = j.value("response", std::string("y"));
        if (j.contains("log_base") && !j["log_base"].is_null()) f.log_base = j["log_base"].get<double>();
        f.term_names = j.at("term_names").get<std::vector<std::string>>();
        auto reals = [&](const char* key) {
            std::vector<double> out;
            for (const auto& x : j.at(key)) out.push_back(detail::real_or_nan(x));
            return out;
        };
        f.beta = reals("beta");
        f.std_error = reals("stderr");
        f.t_value = reals("t_value");
        f.p_value = reals("p_value");
        if (j.contains("term_ranges"))
            for (const auto& r : j["term_ranges"])
                f.term_ranges.emplace_back(detail::real_or_nan(r.at(0)), detail::real_or_nan(r.at(1)));
        f.residual_se = detail::real_or_nan(j.at("residual_se"));
        f.df_residual = j.at("df_residual").get<std::size_t>();
        f.n = j.value("n", std::size_t{0});
        f.r_squared = detail::real_or_nan(j.at("r_squared"));
        f.adj_r_squared = detail::real_or_nan(j.at("adj_r_squared"));
        f.f_statistic = detail::real_or_nan(j.at("f_statistic"));
        f.f_p_value = detail::real_or_nan(j.at("f_p_value"));
        f.rss = detail::real_or_nan(j.at("rss"));
        f.tss = j.contains("tss") ? detail::real_or_nan(j["tss"]) : 0.0;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed fit JSON: ") + e.what(), 0);
    }
    if (f.beta.size() != f.term_names.size()) throw ParseError("fit JSON: beta and term_names differ in length", 0);
    return f;
}

inline Json to_json(const stats::NestedAnova& a) {
    return {{"rss_full", detail::number(a.rss_full)},       {"rss_reduced", detail::number(a.rss_reduced)},
            {"df_full", a.df_full},                         {"df_reduced", a.df_reduced},
            {"sum_sq", detail::number(a.sum_sq)},           {"f", detail::number(a.f)},
            {"p", detail::number(a.p)},                     {"dropped_terms", a.dropped_terms}};
}

inline Json to_json(const stats::OneWayAnova& a) {
    return {{"k", a.k},
            {"group_names", a.group_names},
            {"group_sizes", a.group_sizes},
            {"group_means", detail::numbers(a.group_means)},
            {"df_between", a.df_between},
            {"ss_between", detail::number(a.ss_between)},
            {"ms_between", detail::number(a.ms_between)},
            {"df_within", a.df_within},
            {"ss_within", detail::number(a.ss_within)},
            {"ms_within", detail::number(a.ms_within)},
            {"f", detail::number(a.f)},
            {"p", detail::number(a.p)}};
}

inline Json to_json(const stats::TukeyResult& t) {
    Json pairs = Json::array();
    for (const auto& p : t.pairs)
        pairs.push_back({{"pair", p.label},
                         {"first", p.first},
                         {"second", p.second},
                         {"diff", detail::number(p.diff)},
                         {"lwr", detail::number(p.lwr)},
                         {"upr", detail::number(p.upr)},
                         {"p_adj", detail::number(p.p_adj)}});
    return {{"conf_level", t.conf_level},
            {"q_critical", detail::number(t.q_critical)},
            {"ms_within", detail::number(t.ms_within)},
            {"df_within", t.df_within},
            {"pairs", pairs}};
}

inline Json to_json(const stats::ZTestResult& z) { return {{"z", detail::number(z.z)}, {"alpha", detail::number(z.alpha)}}; }

inline Json to_json(const SelectionReport& r) {
    Json fits = Json::array();
    for (const auto& f : r.fits) fits.push_back(to_json(f));
    Json steps = Json::array();
    for (const auto& a : r.step_tests) steps.push_back(to_json(a));
    Json vs_full = Json::array();
    for (const auto& a : r.versus_full) vs_full.push_back(to_json(a));
    return {{"alpha_keep", r.alpha_keep},
            {"candidate_terms", r.candidate_terms},
            {"n_used", r.n_used},
            {"excluded_zero_prd", r.excluded_zero_prd},
            {"dropped", r.dropped},
            {"chosen_terms", r.chosen().term_names},
            {"fits", fits},
            {"step_tests", steps},
            {"versus_full", vs_full}};
}

inline std::string formula(const stats::RegressionFit& f) {
    std::string s = f.response_name + " ~ ";
    if (f.term_names.size() <= 1) return s + "1";
    for (std::size_t i = 1; i < f.term_names.size(); ++i) s += (i > 1 ? " + " : "") + f.term_names[i];
    return s;
}

// Layout of R's summary.lm.
inline std::string format_fit(const stats::RegressionFit& f) {
    using detail::fmt;
    using detail::pad_left;
    std::ostringstream os;
    os << "Call:\nlm(formula = " << formula(f) << ")\n\n";

    if (!f.residuals.empty()) {
        std::vector<double> r = f.residuals;
        std::sort(r.begin(), r.end());
        os << "Residuals:\n";
        for (const char* h : {"Min", "1Q", "Median", "3Q", "Max"}) os << pad_left(h, 10);
        os << '\n';
        for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) os << pad_left(fmt("%.5f", detail::sorted_quantile(r, q)), 10);
        os << "\n\n";
    }

    std::size_t w = 12;
    for (const auto& t : f.term_names) w = std::max(w, t.size() + 1);
    os << "Coefficients:\n"
       << std::string(w, ' ') << pad_left("Estimate", 11) << pad_left("Std. Error", 11) << pad_left("t value", 9)
       << pad_left("Pr(>|t|)", 10) << '\n';
    for (std::size_t i = 0; i < f.terms(); ++i) {
        os << detail::pad_right(f.term_names[i], w) << pad_left(fmt("%.3e", f.beta[i]), 11)
           << pad_left(fmt("%.3e", f.std_error[i]), 11) << pad_left(fmt("%.3f", f.t_value[i]), 9)
           << pad_left(format_p(f.p_value[i]), 10) << ' ' << detail::significance_stars(f.p_value[i]) << '\n';
    }
    os << "---\nSignif. codes:  0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1\n\n";
    os << "Residual standard error: " << fmt("%.4g", f.residual_se) << " on " << f.df_residual
       << " degrees of freedom\n";
    os << "Multiple R-squared:  " << fmt("%.4g", f.r_squared) << ",\tAdjusted R-squared:  "
       << fmt("%.4g", f.adj_r_squared) << '\n';
    if (f.terms() > 1)
        os << "F-statistic: " << fmt("%.4g", f.f_statistic) << " on " << f.terms() - 1 << " and " << f.df_residual
           << " DF,  p-value: " << format_p(f.f_p_value) << '\n';
    if (f.log_base) os << "(response on log base " << (*f.log_base == 10.0 ? std::string("10") : std::string("e")) << ")\n";
    return os.str();
}

inline std::string format_nested_anova(const stats::NestedAnova& a, const stats::RegressionFit& full,
                                       const stats::RegressionFit& reduced) {
    using detail::fmt;
    using detail::pad_left;
    std::ostringstream os;
    os << "Analysis of Variance Table\n\n"
       << "Model 1: " << formula(full) << "\nModel 2: " << formula(reduced) << '\n'
       << "  " << pad_left("Res.Df", 7) << pad_left("RSS", 10) << pad_left("Df", 4) << pad_left("Sum of Sq", 13)
       << pad_left("F", 9) << pad_left("Pr(>F)", 10) << '\n'
       << "1 " << pad_left(std::to_string(a.df_full), 7) << pad_left(fmt("%.5g", a.rss_full), 10) << '\n'
       << "2 " << pad_left(std::to_string(a.df_reduced), 7) << pad_left(fmt("%.5g", a.rss_reduced), 10)
       << pad_left(std::to_string(static_cast<long long>(a.df_full) - static_cast<long long>(a.df_reduced)), 4)
       << pad_left(fmt("%.5g", -a.sum_sq), 13) << pad_left(fmt("%.4g", a.f), 9) << pad_left(format_p(a.p), 10)
       << '\n';
    return os.str();
}

inline std::string format_one_way_anova(const stats::OneWayAnova& a, const std::string& factor = "factor(channel)") {
    using detail::fmt;
    using detail::pad_left;
    const std::size_t w = std::max<std::size_t>(factor.size() + 1, 10);
    std::ostringstream os;
    os << "Analysis of Variance Table\n\nResponse: log_prd\n"
       << std::string(w, ' ') << pad_left("Df", 6) << pad_left("Sum Sq", 10) << pad_left("Mean Sq", 10)
       << pad_left("F value", 9) << pad_left("Pr(>F)", 10) << '\n'
       << detail::pad_right(factor, w) << pad_left(std::to_string(a.df_between), 6)
       << pad_left(fmt("%.5g", a.ss_between), 10) << pad_left(fmt("%.5g", a.ms_between), 10)
       << pad_left(fmt("%.5g", a.f), 9) << pad_left(format_p(a.p), 10) << ' ' << detail::significance_stars(a.p)
       << '\n'
       << detail::pad_right("Residuals", w) << pad_left(std::to_string(a.df_within), 6)
       << pad_left(fmt("%.5g", a.ss_within), 10) << pad_left(fmt("%.5g", a.ms_within), 10) << '\n';
    return os.str();
}

inline std::string format_tukey(const stats::TukeyResult& t) {
    using detail::fmt;
    using detail::pad_left;
    std::size_t w = 8;
    for (const auto& p : t.pairs) w = std::max(w, p.label.size() + 1);
    std::ostringstream os;
    os << "  Tukey multiple comparisons of means\n    " << fmt("%.0f", t.conf_level * 100)
       << "% family-wise confidence level\n\n"
       << std::string(w, ' ') << pad_left("diff", 12) << pad_left("lwr", 12) << pad_left("upr", 12)
       << pad_left("p adj", 12) << '\n';
    for (const auto& p : t.pairs)
        os << detail::pad_right(p.label, w) << pad_left(fmt("%.7f", p.diff), 12) << pad_left(fmt("%.7f", p.lwr), 12)
           << pad_left(fmt("%.7f", p.upr), 12) << pad_left(fmt("%.7f", p.p_adj), 12) << '\n';
    return os.str();
}

} // namespace eegdist
