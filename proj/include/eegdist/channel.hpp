#pragma once

// Memoryless binary symmetric channel applied to the body of an EncodedBlock.
//
// The corruptible bit space is the ns significance bits followed by the
// M*qbits payload bits; the header and padding bits are never touched. Flip
// positions come from geometric gaps: starting at bit -1, the next flipped bit
// is gap = floor(ln(u) / ln(1 - ber)) + 1 positions further, where u in (0, 1]
// is one Rng::uniform_open0() draw from an Rng seeded with the channel seed.
// This is distributed exactly as independent Bernoulli(ber) flips per bit.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "codec.hpp"
#include "error.hpp"
#include "rng.hpp"

namespace eegdist {

enum class ChannelQuality { Ideal, VeryGood, Good, Bad, VeryBad, Custom };

inline constexpr double default_ber(ChannelQuality q) noexcept {
    switch (q) {
    case ChannelQuality::Ideal: return 0.0;
    case ChannelQuality::VeryGood: return 1e-5;
    case ChannelQuality::Good: return 1e-4;
    case ChannelQuality::Bad: return 1e-3;
    case ChannelQuality::VeryBad: return 5e-3;
    case ChannelQuality::Custom: return 0.0;
    }
    return 0.0;
}

// Record id used in CSV output: 0 ideal, 1..4 the graded models.
inline constexpr int channel_id(ChannelQuality q) noexcept {
    switch (q) {
    case ChannelQuality::Ideal: return 0;
    case ChannelQuality::VeryGood: return 1;
    case ChannelQuality::Good: return 2;
    case ChannelQuality::Bad: return 3;
    case ChannelQuality::VeryBad: return 4;
    case ChannelQuality::Custom: return 5;
    }
    return 5;
}

inline constexpr std::string_view quality_name(ChannelQuality q) noexcept {
    switch (q) {
    case ChannelQuality::Ideal: return "ideal";
    case ChannelQuality::VeryGood: return "very_good";
    case ChannelQuality::Good: return "good";
    case ChannelQuality::Bad: return "bad";
    case ChannelQuality::VeryBad: return "very_bad";
    case ChannelQuality::Custom: return "custom";
    }
    return "custom";
}

inline std::optional<ChannelQuality> parse_quality(std::string_view name) noexcept {
    for (auto q : {ChannelQuality::Ideal, ChannelQuality::VeryGood, ChannelQuality::Good, ChannelQuality::Bad,
                   ChannelQuality::VeryBad})
        if (quality_name(q) == name) return q;
    return std::nullopt;
}

struct ChannelModel {
    ChannelQuality quality = ChannelQuality::Ideal;
    double ber = 0.0;
    std::uint64_t seed = 0;

    static ChannelModel of(ChannelQuality q, std::uint64_t seed = 0) { return {q, default_ber(q), seed}; }

    void validate() const {
        if (!(ber >= 0.0 && ber <= 0.5)) throw InvalidArgument("bit error rate must lie in [0, 0.5]");
        if (quality == ChannelQuality::Ideal && ber != 0.0) throw InvalidArgument("ideal channel must have ber = 0");
    }
};

// Number of bits exposed to the channel.
inline std::size_t corruptible_bits(const EncodedBlock& block) noexcept {
    return std::size_t{block.header.ns} + block.payload_bit_length;
}

inline EncodedBlock transmit(const EncodedBlock& block, const ChannelModel& channel) {
    channel.validate();
    EncodedBlock out = block;
    if (channel.ber == 0.0) return out;

    const std::size_t sig_bits = block.header.ns;
    const std::size_t total = corruptible_bits(block);
    auto flip = [&](std::size_t bit) {
        if (bit < sig_bits) {
            out.significance[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        } else {
            const std::size_t p = bit - sig_bits;
            if (p / 8 < out.payload.size()) out.payload[p / 8] ^= static_cast<std::uint8_t>(1u << (p % 8));
        }
    };

    Rng rng(channel.seed);
    const double log_keep = std::log1p(-channel.ber);
    double pos = -1.0;
    while (true) {
        const double gap = std::floor(std::log(rng.uniform_open0()) / log_keep) + 1.0;
        pos += gap;
        if (!(pos < static_cast<double>(total))) break;
        flip(static_cast<std::size_t>(pos));
    }
    return out;
}

} // namespace eegdist
