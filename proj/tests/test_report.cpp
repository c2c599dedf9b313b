#include <gtest/gtest.h>

#include <random>

#include "eegdist/experiment.hpp"
#include "eegdist/report.hpp"
#include "eegdist/svg.hpp"

using namespace eegdist;

namespace {

std::vector<ExperimentRecord> small_records() {
    std::vector<ExperimentRecord> out;
    std::mt19937_64 gen(1);
    std::normal_distribution<double> noise(0, 0.03);
    for (double cr : {40.0, 60.0, 80.0})
        for (int f : {2, 8, 20})
            for (std::size_t l : {1024u, 4096u})
                for (int ch : {0, 1}) {
                    ExperimentRecord r;
                    r.cr = cr;
                    r.filter_length = f;
                    r.data_length = l;
                    r.transmission_delay = static_cast<double>(l) * (1.0 - cr / 100.0) * 0.05 + noise(gen);
                    r.channel = ch;
                    r.log_prd = -0.4 + 0.02 * cr - 0.01 * f + 0.1 * ch + noise(gen);
                    r.prd = std::pow(10.0, r.log_prd);
                    out.push_back(r);
                }
    return out;
}

} // namespace

TEST(Report, FitJsonCarriesSummaryStatistics) {
    const auto fit = fit_log_distortion(small_records(), full_model_terms());
    const auto j = to_json(fit);
    for (const char* key : {"term_names", "beta", "stderr", "t_value", "p_value", "r_squared", "adj_r_squared",
                            "f_statistic", "f_p_value", "residual_se", "df_residual", "rss", "log_base"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["term_names"].size(), 5u);
    EXPECT_EQ(j["log_base"].get<double>(), 10.0);
}

TEST(Report, FitJsonRoundTrip) {
    const auto fit = fit_log_distortion(small_records(), reduced2_terms());
    const auto back = regression_fit_from_json(Json::parse(to_json(fit).dump()));
    EXPECT_EQ(back.term_names, fit.term_names);
    EXPECT_EQ(back.beta, fit.beta);
    EXPECT_EQ(back.std_error, fit.std_error);
    EXPECT_EQ(back.term_ranges, fit.term_ranges);
    EXPECT_EQ(back.log_base, fit.log_base);
    EXPECT_EQ(back.r_squared, fit.r_squared);
    EXPECT_THROW((void)regression_fit_from_json(Json::parse("{\"beta\": [1]}")), ParseError);
}

TEST(Report, AnovaAndTukeyJson) {
    const std::vector<stats::Group> g{{"a", {1, 2, 3, 2}}, {"b", {2, 3, 4, 3}}, {"c", {5, 6, 5, 7}}};
    const auto a = to_json(stats::one_way_anova(g));
    for (const char* key : {"df_between", "ss_between", "ms_between", "df_within", "ss_within", "ms_within", "f", "p"})
        EXPECT_TRUE(a.contains(key)) << key;
    const auto t = to_json(stats::tukey_hsd(g));
    ASSERT_EQ(t["pairs"].size(), 3u);
    EXPECT_EQ(t["pairs"][0]["pair"], "b-a");
    for (const char* key : {"diff", "lwr", "upr", "p_adj"}) EXPECT_TRUE(t["pairs"][0].contains(key)) << key;
}

TEST(Report, SelectionJson) {
    const auto rep = model_selection(small_records());
    const auto j = to_json(rep);
    EXPECT_EQ(j["fits"].size(), rep.fits.size());
    EXPECT_EQ(j["step_tests"].size(), rep.dropped.size());
    EXPECT_EQ(j["chosen_terms"][0], stats::kInterceptName);
}

TEST(Report, NonFiniteNumbersBecomeNull) {
    stats::NestedAnova a;
    a.f = std::nan("");
    EXPECT_TRUE(to_json(a)["f"].is_null());
}

TEST(Report, PValueFormatting) {
    EXPECT_EQ(format_p(1e-20), "< 1e-16");
    EXPECT_EQ(format_p(0.0), "< 1e-16");
    EXPECT_EQ(format_p(0.9329), "0.9329");
    EXPECT_EQ(format_p(std::nan("")), "NA");
}

TEST(Report, TextTablesMentionTerms) {
    const auto recs = small_records();
    const auto full = fit_log_distortion(recs, full_model_terms());
    const auto red = fit_log_distortion(recs, reduced2_terms());
    const auto text = format_fit(full);
    for (const char* s : {"(Intercept)", "cr", "filter_length", "data_length", "transmission_delay_ms",
                          "Multiple R-squared", "F-statistic"})
        EXPECT_NE(text.find(s), std::string::npos) << s;
    const auto table = format_nested_anova(stats::nested_anova(full, red), full, red);
    EXPECT_NE(table.find("Analysis of Variance Table"), std::string::npos);
    EXPECT_EQ(formula(red), "log_prd ~ cr + filter_length");
    const std::vector<stats::Group> g{{"1", {1, 2, 3}}, {"2", {3, 4, 5}}};
    EXPECT_NE(format_tukey(stats::tukey_hsd(g)).find("2-1"), std::string::npos);
    EXPECT_NE(format_one_way_anova(stats::one_way_anova(g)).find("Residuals"), std::string::npos);
}

TEST(Svg, ChartsAreWellFormed) {
    const auto recs = small_records();
    for (const auto& svg : {svg::lines_chart(recs), svg::surface_chart(recs), svg::box_chart(recs)}) {
        EXPECT_EQ(svg.rfind("<svg", 0), 0u);
        EXPECT_NE(svg.find("</svg>"), std::string::npos);
        EXPECT_EQ(svg.find("nan"), std::string::npos);
    }
}
