#include <gtest/gtest.h>

#include <sstream>

#include "eegdist/config.hpp"
#include "support.hpp"

using namespace eegdist;
namespace ts = testing_support;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

} // namespace

TEST(Config, DefaultsWhenEmpty) {
    const auto cfg = parse("");
    EXPECT_EQ(cfg.sweep.cr_grid.size(), 10u);
    EXPECT_EQ(cfg.sweep.filter_lengths.size(), 10u);
    EXPECT_EQ(cfg.sweep.block_lengths, (std::vector<std::size_t>{1024, 2048, 4096}));
    EXPECT_EQ(cfg.sweep.channels.size(), 1u);
    EXPECT_EQ(cfg.sweep.channels[0].quality, ChannelQuality::Ideal);
    EXPECT_EQ(cfg.study.channels.size(), 4u);
    EXPECT_EQ(cfg.study.trials, 300);
    EXPECT_EQ(cfg.study.cr, 60.0);
    EXPECT_EQ(cfg.study.filter_length, 8);
    EXPECT_NO_THROW(cfg.sweep.validate());
    EXPECT_NO_THROW(cfg.study.validate());
}

TEST(Config, ParsesAllSections) {
    const auto cfg = parse(R"(# sweep settings
[sweep]
cr_grid = 10, 20.5, 30
filter_lengths = 2,4
block_lengths = 512
trials = 3
master_seed = 99
qbits = 10   ; inline comment
levels = 4
link_rate_bps = 1e5
log_base = e
channels = ideal, noisy

[channel.noisy]
ber = 0.02

[channel.good]
ber = 2e-4

[channel_study]
cr = 70
filter_length = 12
block_length = 2048
trials = 50
conf_level = 0.99
channels = good, noisy
)");
    const auto& sw = cfg.sweep;
    EXPECT_EQ(sw.cr_grid, (std::vector<double>{10, 20.5, 30}));
    EXPECT_EQ(sw.filter_lengths, (std::vector<int>{2, 4}));
    EXPECT_EQ(sw.block_lengths, (std::vector<std::size_t>{512}));
    EXPECT_EQ(sw.trials, 3);
    EXPECT_EQ(sw.master_seed, 99u);
    EXPECT_EQ(sw.qbits, 10);
    EXPECT_EQ(sw.levels, 4);
    EXPECT_EQ(sw.link_rate_bps, 1e5);
    EXPECT_EQ(sw.log_base, LogBase::Natural);
    ASSERT_EQ(sw.channels.size(), 2u);
    EXPECT_EQ(sw.channels[1].name, "noisy");
    EXPECT_EQ(sw.channels[1].quality, ChannelQuality::Custom);
    EXPECT_EQ(sw.channels[1].id, 5);
    EXPECT_EQ(sw.channels[1].ber, 0.02);

    const auto& st = cfg.study;
    EXPECT_EQ(st.cr, 70.0);
    EXPECT_EQ(st.filter_length, 12);
    EXPECT_EQ(st.block_length, 2048u);
    EXPECT_EQ(st.trials, 50);
    EXPECT_EQ(st.conf_level, 0.99);
    EXPECT_EQ(st.master_seed, 99u); // inherited from [sweep]
    EXPECT_EQ(st.qbits, 10);
    ASSERT_EQ(st.channels.size(), 2u);
    EXPECT_EQ(st.channels[0].quality, ChannelQuality::Good);
    EXPECT_EQ(st.channels[0].ber, 2e-4);
    EXPECT_NO_THROW(sw.validate());
    EXPECT_NO_THROW(st.validate());
}

TEST(Config, OverriddenBuiltinBerFlowsIntoDefaultStudy) {
    const auto cfg = parse("[channel.very_bad]\nber = 0.01\n");
    EXPECT_EQ(cfg.study.channels[3].ber, 0.01);
    EXPECT_EQ(cfg.study.channels[3].id, 4);
}

TEST(Config, Errors) {
    EXPECT_THROW(parse("[sweep]\ncr_grid = 1, x\n"), ParseError);
    EXPECT_THROW(parse("[sweep]\nbogus = 1\n"), ParseError);
    EXPECT_THROW(parse("[mystery]\n"), ParseError);
    EXPECT_THROW(parse("trials = 3\n"), ParseError);
    EXPECT_THROW(parse("[sweep\n"), ParseError);
    EXPECT_THROW(parse("[sweep]\ntrials\n"), ParseError);
    EXPECT_THROW(parse("[sweep]\nchannels = nowhere\n"), ParseError);
    EXPECT_THROW(parse("[channel.custom_a]\nid = 9\n"), ParseError);
    EXPECT_THROW(parse("[sweep]\ntrials = 2.5\n"), ParseError);
    EXPECT_THROW(parse("[sweep]\nlog_base = 2\n"), ParseError);
    try {
        parse("[sweep]\n\ntrials 3\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Config, ValidationCatchesBadValues) {
    auto cfg = parse("[sweep]\nfilter_lengths = 3\n");
    EXPECT_THROW(cfg.sweep.validate(), InvalidArgument);
    cfg = parse("[sweep]\nblock_lengths = 1000\n");
    EXPECT_THROW(cfg.sweep.validate(), InvalidArgument);
    cfg = parse("[sweep]\ncr_grid = 100\n");
    EXPECT_THROW(cfg.sweep.validate(), InvalidArgument);
    cfg = parse("[channel.x]\nber = 0.7\n[sweep]\nchannels = x\n");
    EXPECT_THROW(cfg.sweep.validate(), InvalidArgument);
    cfg = parse("[channel_study]\nchannels = good\n");
    EXPECT_THROW(cfg.study.validate(), InvalidArgument);
    cfg = parse("[channel_study]\ntrials = 1\n");
    EXPECT_THROW(cfg.study.validate(), InvalidArgument);
}

TEST(Config, ShippedExampleLoads) {
    const auto cfg = load_config((ts::source_dir() / "configs" / "default.cfg").string());
    EXPECT_NO_THROW(cfg.sweep.validate());
    EXPECT_NO_THROW(cfg.study.validate());
    EXPECT_THROW((void)load_config("/nonexistent/eegdist.cfg"), IoError);
}
