#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "eegdist/channel.hpp"
#include "eegdist/metrics.hpp"
#include "eegdist/rng.hpp"
#include "eegdist/signal.hpp"
#include "support.hpp"

using namespace eegdist;
namespace ts = testing_support;

namespace {

std::size_t flipped_bits(const EncodedBlock& a, const EncodedBlock& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.significance.size(); ++i)
        n += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(a.significance[i] ^ b.significance[i])));
    for (std::size_t i = 0; i < a.payload.size(); ++i)
        n += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(a.payload[i] ^ b.payload[i])));
    return n;
}

// About 1.1 million corruptible bits.
const EncodedBlock& large_block() {
    static const EncodedBlock blk = encode(synth_eeg(21, 65536), {4, 5}, 0.0, 16);
    return blk;
}

} // namespace

TEST(Rng, SplitMixReferenceValues) {
    EXPECT_EQ(splitmix64(0), 16294208416658607535ull);
    EXPECT_EQ(splitmix64(42), 13679457532755275413ull);
}

TEST(Rng, EngineIsMersenneTwisterSeededBySplitMix) {
    Rng r(42);
    std::mt19937_64 ref(13679457532755275413ull);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(r.next(), ref());
}

TEST(Rng, GoldenStream) {
    Rng r(42);
    EXPECT_EQ(r.next(), 2576493707698874361ull);
    EXPECT_EQ(r.next(), 17880808640956396325ull);
    EXPECT_EQ(mix_seed({1, 2, 3}), 17768673091408470947ull);
    EXPECT_NE(mix_seed({1, 2, 3}), mix_seed({3, 2, 1}));
}

TEST(Rng, UniformRanges) {
    Rng r(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        const double v = r.uniform_open0();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_GT(v, 0.0);
        ASSERT_LE(v, 1.0);
        ASSERT_LT(r.below(13), 13u);
    }
}

TEST(ChannelModel, DefaultsAndNames) {
    EXPECT_EQ(default_ber(ChannelQuality::Ideal), 0.0);
    EXPECT_EQ(default_ber(ChannelQuality::VeryGood), 1e-5);
    EXPECT_EQ(default_ber(ChannelQuality::Good), 1e-4);
    EXPECT_EQ(default_ber(ChannelQuality::Bad), 1e-3);
    EXPECT_EQ(default_ber(ChannelQuality::VeryBad), 5e-3);
    EXPECT_EQ(parse_quality("very_bad"), ChannelQuality::VeryBad);
    EXPECT_FALSE(parse_quality("awful").has_value());
    EXPECT_EQ(channel_id(ChannelQuality::Good), 2);
}

TEST(ChannelModel, Validation) {
    EXPECT_THROW((ChannelModel{ChannelQuality::Ideal, 1e-3, 1}.validate()), InvalidArgument);
    EXPECT_THROW((ChannelModel{ChannelQuality::Custom, 0.6, 1}.validate()), InvalidArgument);
    EXPECT_THROW((ChannelModel{ChannelQuality::Custom, -1e-9, 1}.validate()), InvalidArgument);
    EXPECT_NO_THROW((ChannelModel{ChannelQuality::Custom, 0.5, 1}.validate()));
}

TEST(Transmit, ZeroBerIsIdentity) {
    const auto blk = encode(synth_eeg(1, 1024), {8, 5}, 60.0);
    EXPECT_EQ(transmit(blk, ChannelModel::of(ChannelQuality::Ideal, 99)), blk);
    EXPECT_EQ(transmit(blk, {ChannelQuality::Custom, 0.0, 5}), blk);
}

TEST(Transmit, FlipCountWithinFiveSigma) {
    const auto& blk = large_block();
    const double n = static_cast<double>(corruptible_bits(blk));
    ASSERT_GE(n, 1e6);
    const double p = 0.001;
    const auto out = transmit(blk, {ChannelQuality::Custom, p, 2024});
    const double sigma = std::sqrt(n * p * (1 - p));
    EXPECT_NEAR(static_cast<double>(flipped_bits(blk, out)), n * p, 5 * sigma);
}

TEST(Transmit, FlipRatePerQualityWithinThreeSigma) {
    const auto& blk = large_block();
    const double n = static_cast<double>(corruptible_bits(blk));
    for (auto q : {ChannelQuality::VeryGood, ChannelQuality::Good, ChannelQuality::Bad, ChannelQuality::VeryBad}) {
        const double p = default_ber(q);
        const auto out = transmit(blk, ChannelModel::of(q, 77));
        const double sigma = std::sqrt(n * p * (1 - p));
        EXPECT_NEAR(static_cast<double>(flipped_bits(blk, out)), n * p, 3 * sigma) << quality_name(q);
    }
}

TEST(Transmit, HalfBerFlipsHalfTheBits) {
    const auto blk = encode(synth_eeg(2, 4096), {8, 5}, 0.0, 16);
    const double n = static_cast<double>(corruptible_bits(blk));
    const auto out = transmit(blk, {ChannelQuality::Custom, 0.5, 3});
    EXPECT_NEAR(static_cast<double>(flipped_bits(blk, out)), n / 2, 5 * std::sqrt(n / 4));
}

TEST(Transmit, DeterministicAndSeedSensitive) {
    const auto blk = encode(synth_eeg(3, 4096), {8, 5}, 60.0);
    const ChannelModel ch{ChannelQuality::Custom, 0.01, 123};
    EXPECT_EQ(transmit(blk, ch), transmit(blk, ch));
    EXPECT_NE(transmit(blk, ch), transmit(blk, {ChannelQuality::Custom, 0.01, 124}));
}

TEST(Transmit, HeaderNeverChanges) {
    const auto blk = encode(synth_eeg(4, 2048), {6, 5}, 48.0);
    auto header = serialize(blk);
    header.resize(kHeaderBytes);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (double ber : {1e-5, 1e-3, 0.05, 0.5}) {
            const auto out = transmit(blk, {ChannelQuality::Custom, ber, seed});
            EXPECT_EQ(out.header, blk.header);
            const auto bytes = serialize(out);
            ASSERT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
            EXPECT_EQ(out.payload_bit_length, blk.payload_bit_length);
        }
    }
}

TEST(Transmit, GoldenCorruptedBlock) {
    const auto fixtures = ts::source_dir() / "tests" / "fixtures";
    const auto blk = deserialize(ts::read_bytes(fixtures / "golden_block.eegc"));
    const auto out = transmit(blk, {ChannelQuality::Custom, 0.01, 42});
    EXPECT_EQ(serialize(out), ts::read_bytes(fixtures / "golden_block_ber0.01_seed42.eegc"));
}

TEST(Transmit, MeanPrdNonDecreasingInBer) {
    const auto sig = synth_eeg(5, 4096);
    const auto blk = encode(sig, {8, 5}, 60.0, 12);
    const std::vector<double> bers{0.0, 1e-5, 1e-4, 1e-3, 5e-3, 2e-2};
    double prev = -1.0;
    for (double ber : bers) {
        double total = 0.0;
        const int seeds = 40;
        for (int s = 0; s < seeds; ++s) {
            const auto out = transmit(blk, {ber == 0.0 ? ChannelQuality::Ideal : ChannelQuality::Custom, ber,
                                            static_cast<std::uint64_t>(s)});
            total += prd(sig.samples(), decode_samples(out, true));
        }
        const double mean = total / seeds;
        EXPECT_GE(mean, prev) << "ber=" << ber;
        prev = mean;
    }
}
