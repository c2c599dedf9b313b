#include <gtest/gtest.h>

#include <cmath>

#include "eegdist/codec.hpp"
#include "eegdist/metrics.hpp"
#include "eegdist/wavelet.hpp"
#include "support.hpp"

using namespace eegdist;
namespace ts = testing_support;

TEST(Prd, Examples) {
    const std::vector<double> x{2.0, 0.0}, xr{1.0, 0.0}, zero{0.0, 0.0};
    EXPECT_EQ(prd(x, x), 0.0);
    EXPECT_DOUBLE_EQ(prd(x, zero), 100.0);
    EXPECT_DOUBLE_EQ(prd(x, xr), 50.0);
}

TEST(Prd, Errors) {
    const std::vector<double> a{1.0, 2.0}, b{1.0}, z{0.0, 0.0};
    EXPECT_THROW((void)prd(a, b), InvalidArgument);
    EXPECT_THROW((void)prd(z, a), InvalidArgument);
}

TEST(Prd, ScaleInvariant) {
    std::mt19937_64 gen(3);
    for (double a : {-7.5, 1e-6, 3.0, 1e6}) {
        const auto x = ts::random_signal(gen, 512);
        auto xr = x;
        for (auto& v : xr) v += 0.01 * std::sin(v * 17.0);
        std::vector<double> ax(x.size()), axr(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            ax[i] = a * x[i];
            axr[i] = a * xr[i];
        }
        EXPECT_NEAR(prd(ax, axr), prd(x, xr), 1e-12 * prd(x, xr));
    }
}

TEST(Prd, NonNegativeAndZeroOnlyForEqualSignals) {
    std::mt19937_64 gen(4);
    const auto x = ts::random_signal(gen, 64);
    auto xr = x;
    EXPECT_EQ(prd(x, xr), 0.0);
    xr[17] = std::nextafter(xr[17], 1e9);
    EXPECT_GT(prd(x, xr), 0.0);
}

TEST(Prd, MatchesDroppedCoefficientEnergy) {
    std::mt19937_64 gen(5);
    for (int f : {2, 8, 20}) {
        const auto x = ts::random_signal(gen, 1024);
        const WaveletSpec spec{f, 4};
        const auto kept = threshold_to_ratio(dwt(x, spec), 70.0);
        const auto xr = idwt_samples(kept, spec);
        double dropped = 0.0, total = 0.0;
        for (std::size_t i = 0; i < kept.ns(); ++i) {
            total += kept.values[i] * kept.values[i];
            if (!kept.keep_mask[i]) dropped += kept.values[i] * kept.values[i];
        }
        const double coeff_route = std::sqrt(dropped / total) * 100.0;
        EXPECT_NEAR(prd(x, xr), coeff_route, 1e-9 * coeff_route);
    }
}

TEST(CompressionRatio, Examples) {
    EXPECT_EQ(compression_ratio(4096, 4096), 0.0);
    EXPECT_EQ(compression_ratio(2048, 4096), 50.0);
    EXPECT_EQ(compression_ratio(1024, 4096), 75.0);
    EXPECT_THROW((void)compression_ratio(0, 8), InvalidArgument);
    EXPECT_THROW((void)compression_ratio(9, 8), InvalidArgument);
}

TEST(LogDistortion, Examples) {
    EXPECT_EQ(log_distortion(1.0), 0.0);
    EXPECT_DOUBLE_EQ(log_distortion(100.0), 2.0);
    EXPECT_NEAR(log_distortion(6.41), 0.8069, 1e-3);
    EXPECT_NEAR(log_distortion(std::exp(2.0), LogBase::Natural), 2.0, 1e-15);
    EXPECT_THROW((void)log_distortion(0.0), InvalidArgument);
    EXPECT_THROW((void)log_distortion(-1.0), InvalidArgument);
}

TEST(LogDistortion, InverseOfExp) {
    for (double d : {-1.5, 0.0, 0.80667, 2.3})
        for (auto base : {LogBase::Ten, LogBase::Natural})
            EXPECT_NEAR(log_distortion(exp_distortion(d, base), base), d, 1e-13);
}

TEST(CompensatedSum, RecoversSmallTermsNextToLargeOnes) {
    CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    EXPECT_EQ(s.value(), 1000.0);
}
