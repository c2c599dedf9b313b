#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/filters/daubechies.hpp>

#include "eegdist/wavelet.hpp"
#include "support.hpp"

using namespace eegdist;
namespace ts = testing_support;

namespace {

template <unsigned P>
std::vector<double> boost_filter() {
    const auto a = boost::math::filters::daubechies_scaling_filter<double, P>();
    return {a.begin(), a.end()};
}

std::vector<double> reference_filter(int f) {
    switch (f / 2) {
    case 1: return boost_filter<1>();
    case 2: return boost_filter<2>();
    case 3: return boost_filter<3>();
    case 4: return boost_filter<4>();
    case 5: return boost_filter<5>();
    case 6: return boost_filter<6>();
    case 7: return boost_filter<7>();
    case 8: return boost_filter<8>();
    case 9: return boost_filter<9>();
    default: return boost_filter<10>();
    }
}

double rel_error(const std::vector<double>& a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += a[i] * a[i];
    }
    return std::sqrt(num / den);
}

double energy(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

const std::vector<int> kFilterLengths{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};

} // namespace

TEST(DaubechiesFilter, HaarIsExact) {
    const auto h = daubechies_filter(2);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_DOUBLE_EQ(h[0], 1.0 / std::numbers::sqrt2);
    EXPECT_DOUBLE_EQ(h[1], 1.0 / std::numbers::sqrt2);
}

TEST(DaubechiesFilter, SumIsSqrt2) {
    for (int f : kFilterLengths) {
        double s = 0.0;
        for (double v : daubechies_filter(f)) s += v;
        EXPECT_NEAR(s, std::numbers::sqrt2, 1e-12) << "F=" << f;
    }
}

TEST(DaubechiesFilter, DoubleShiftOrthonormality) {
    for (int f : kFilterLengths) {
        const auto h = daubechies_filter(f);
        for (int k = 0; 2 * k < f; ++k) {
            double dot = 0.0;
            for (int n = 0; n + 2 * k < f; ++n) dot += h[n] * h[n + 2 * k];
            EXPECT_NEAR(dot, k == 0 ? 1.0 : 0.0, 1e-10) << "F=" << f << " k=" << k;
        }
    }
}

TEST(DaubechiesFilter, MatchesIndependentTables) {
    for (int f : kFilterLengths) {
        const auto h = daubechies_filter(f);
        auto ref = reference_filter(f);
        ASSERT_EQ(ref.size(), h.size());
        // Either orientation is a valid convention; compare against the closer one.
        auto rev = ref;
        std::reverse(rev.begin(), rev.end());
        double best = 1e300;
        for (const auto* r : {&ref, &rev}) {
            double e = 0.0;
            for (std::size_t i = 0; i < h.size(); ++i) e = std::max(e, std::abs(h[i] - (*r)[i]));
            best = std::min(best, e);
        }
        EXPECT_LT(best, 1e-14) << "F=" << f;
    }
}

TEST(DaubechiesFilter, HighpassHasZeroSumAndIsOrthogonalToLowpass) {
    for (int f : kFilterLengths) {
        const auto h = daubechies_filter(f);
        const auto g = qmf_highpass(h);
        double s = 0.0;
        for (double v : g) s += v;
        EXPECT_NEAR(s, 0.0, 1e-12);
        for (int k = 0; 2 * k < f; ++k) {
            double dot = 0.0, dot2 = 0.0;
            for (int n = 0; n + 2 * k < f; ++n) {
                dot += h[n] * g[n + 2 * k];
                dot2 += g[n] * h[n + 2 * k];
            }
            EXPECT_NEAR(dot, 0.0, 1e-10);
            EXPECT_NEAR(dot2, 0.0, 1e-10);
        }
    }
}

TEST(DaubechiesFilter, RejectsUnsupportedLengths) {
    for (int f : {0, 1, 3, 22, -2}) EXPECT_THROW((void)daubechies_filter(f), InvalidArgument);
}

TEST(Dwt, HaarPairExample) {
    const std::vector<double> x{1.0, 1.0};
    const auto c = dwt(x, {2, 1});
    ASSERT_EQ(c.ns(), 2u);
    EXPECT_NEAR(c.values[0], std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(c.values[1], 0.0, 1e-15);
    EXPECT_EQ(c.approximation().size(), 1u);
    EXPECT_EQ(c.detail(1).size(), 1u);
}

TEST(Dwt, LayoutAndMask) {
    std::mt19937_64 gen(1);
    const auto x = ts::random_signal(gen, 256);
    const auto c = dwt(x, {8, 3});
    EXPECT_EQ(c.ns(), 256u);
    EXPECT_EQ(c.retained(), 256u);
    EXPECT_EQ(c.approximation().size(), 32u);
    EXPECT_EQ(c.detail(3).size(), 32u);
    EXPECT_EQ(c.detail(2).size(), 64u);
    EXPECT_EQ(c.detail(1).size(), 128u);
}

TEST(Dwt, ConstantSignalHasNoDetail) {
    const std::vector<double> x(512, 3.25);
    for (int f : kFilterLengths) {
        for (int j : {1, 3, 5}) {
            const auto c = dwt(x, {f, j});
            for (int lvl = 1; lvl <= j; ++lvl)
                for (double d : c.detail(lvl)) ASSERT_NEAR(d, 0.0, 1e-10) << "F=" << f << " J=" << j;
        }
    }
}

TEST(Dwt, ParsevalAndPerfectReconstruction) {
    std::mt19937_64 gen(2);
    for (int f : kFilterLengths) {
        for (int j = 1; j <= 5; ++j) {
            for (std::size_t ns : {std::size_t{64}, std::size_t{1024}, std::size_t{4096}}) {
                const auto x = ts::random_signal(gen, ns, 50.0);
                const WaveletSpec spec{f, j};
                const auto c = dwt(x, spec);
                EXPECT_NEAR(energy(c.values), energy(x), 1e-9 * energy(x));
                EXPECT_LT(rel_error(x, idwt_samples(c, spec)), 1e-9) << "F=" << f << " J=" << j;
            }
        }
    }
}

TEST(Dwt, Linearity) {
    std::mt19937_64 gen(3);
    const double a = 2.5, b = -0.75;
    for (int f : {2, 10, 20}) {
        const WaveletSpec spec{f, 4};
        const auto x = ts::random_signal(gen, 512);
        const auto y = ts::random_signal(gen, 512);
        std::vector<double> z(512);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
        const auto cx = dwt(x, spec), cy = dwt(y, spec), cz = dwt(z, spec);
        for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(cz.values[i], a * cx.values[i] + b * cy.values[i], 1e-9);
    }
}

TEST(Dwt, VanishingMomentsOnInteriorCoefficients) {
    const std::size_t ns = 1024;
    for (int f : kFilterLengths) {
        const int degree = f / 2 - 1;
        std::vector<double> x(ns);
        for (std::size_t i = 0; i < ns; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(ns);
            x[i] = std::pow(t - 0.3, degree) + 0.5 * std::pow(t, std::max(0, degree - 1));
        }
        const auto c = dwt(x, {f, 1});
        const auto d = c.detail(1);
        const double scale = std::sqrt(energy(x) / static_cast<double>(ns));
        // The periodic wrap only touches the last ceil(F/2) detail coefficients.
        for (std::size_t k = 0; k + static_cast<std::size_t>(f) < d.size(); ++k)
            ASSERT_LT(std::abs(d[k]), 1e-6 * scale) << "F=" << f << " k=" << k;
    }
}

TEST(Idwt, ZeroCoefficientsGiveZeroSignal) {
    CoefficientSet c;
    c.values.assign(256, 0.0);
    c.keep_mask.assign(256, 1);
    c.levels = 4;
    for (double v : idwt_samples(c, {6, 4})) EXPECT_EQ(v, 0.0);
}

TEST(Idwt, MaskedCoefficientsAreTreatedAsZero) {
    std::mt19937_64 gen(4);
    const auto x = ts::random_signal(gen, 256);
    const WaveletSpec spec{4, 3};
    auto c = dwt(x, spec);
    for (std::size_t i = 0; i < c.ns(); i += 3) c.keep_mask[i] = 0;
    CoefficientSet zeroed = c;
    zeroed.values = c.masked();
    std::fill(zeroed.keep_mask.begin(), zeroed.keep_mask.end(), std::uint8_t{1});
    EXPECT_EQ(idwt_samples(c, spec), idwt_samples(zeroed, spec));
}

TEST(Idwt, ConstantSignalSurvivesDroppingAllDetails) {
    const std::vector<double> x(1024, -4.5);
    for (int f : kFilterLengths) {
        const WaveletSpec spec{f, 5};
        auto c = dwt(x, spec);
        const std::size_t na = c.approximation().size();
        for (std::size_t i = na; i < c.ns(); ++i) c.keep_mask[i] = 0;
        EXPECT_LT(rel_error(x, idwt_samples(c, spec)), 1e-9);
    }
}

TEST(Idwt, ReturnsSignalWithRate) {
    std::mt19937_64 gen(5);
    const auto x = ts::random_signal(gen, 128);
    const WaveletSpec spec{4, 2};
    const auto s = idwt(dwt(x, spec), spec, 250.0);
    EXPECT_EQ(s.size(), 128u);
    EXPECT_EQ(s.sampling_rate(), 250.0);
}

TEST(Wavelet, Errors) {
    const std::vector<double> x(100, 1.0);
    EXPECT_THROW((void)dwt(x, {4, 3}), InvalidArgument); // 100 not divisible by 8
    EXPECT_THROW((void)dwt(x, {5, 1}), InvalidArgument);
    EXPECT_THROW((void)dwt(x, {4, 0}), InvalidArgument);
    std::vector<double> y(64, 1.0);
    auto c = dwt(y, {4, 2});
    EXPECT_THROW((void)idwt_samples(c, {4, 3}), InvalidArgument);
    c.keep_mask.pop_back();
    EXPECT_THROW((void)idwt_samples(c, {4, 2}), InvalidArgument);
}
