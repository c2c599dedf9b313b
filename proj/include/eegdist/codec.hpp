#pragma once

// Keep-M-largest thresholding, uniform quantization and the EEGC bitstream.
//
// Bitstream (little-endian):
//   offset  size  field
//        0     4  magic "EEGC"
//        4     1  version (1)
//        5     1  flags (0)
//        6     4  ns
//       10     1  levels
//       11     1  filter_length
//       12     1  qbits
//       13     1  reserved (0)
//       14     8  target_cr  (f64)
//       22     8  lo         (f64)
//       30     8  hi         (f64)
//       38        ceil(ns/8) significance bytes, bit i in byte i/8, LSB first
//                 M codes of qbits bits each, packed LSB first, zero padded
// M is not stored; it follows from ns and target_cr.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "metrics.hpp"
#include "signal.hpp"
#include "wavelet.hpp"

namespace eegdist {

inline constexpr std::uint8_t kBitstreamVersion = 1;
inline constexpr std::size_t kHeaderBytes = 38;
inline constexpr int kDefaultQuantBits = 12;

// Number of coefficients kept for a target compression ratio (percent); at least 1.
inline std::size_t retained_count(double cr, std::size_t ns) {
    if (!(cr >= 0.0 && cr < 100.0)) throw InvalidArgument("compression ratio must lie in [0, 100)");
    const auto m = static_cast<long long>(std::llround((1.0 - cr / 100.0) * static_cast<double>(ns)));
    return static_cast<std::size_t>(std::clamp<long long>(m, 1, static_cast<long long>(ns)));
}

// Keeps the M = retained_count(cr, ns) largest-magnitude coefficients. Ties go
// to the smaller flat index.
inline CoefficientSet threshold_to_ratio(const CoefficientSet& coeffs, double cr) {
    const std::size_t ns = coeffs.ns();
    if (ns == 0) throw InvalidArgument("empty coefficient set");
    const std::size_t m = retained_count(cr, ns);

    std::vector<std::size_t> order(ns);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& v = coeffs.values;
    auto larger = [&v](std::size_t a, std::size_t b) {
        const double ma = std::abs(v[a]);
        const double mb = std::abs(v[b]);
        return ma != mb ? ma > mb : a < b;
    };
    if (m < ns) std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(), larger);

    CoefficientSet out = coeffs;
    std::fill(out.keep_mask.begin(), out.keep_mask.end(), std::uint8_t{0});
    for (std::size_t i = 0; i < m; ++i) out.keep_mask[order[i]] = 1;
    return out;
}

// Uniform mid-rise quantizer with 2^bits cells over [lo, hi].
struct QuantizerSpec {
    int bits = kDefaultQuantBits;
    double lo = 0.0;
    double hi = 1.0;

    void validate() const {
        if (bits < 1 || bits > 16) throw InvalidArgument("quantizer bits must be in 1..16");
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw InvalidArgument("quantizer range requires finite lo < hi");
    }
    std::uint32_t levels() const noexcept { return std::uint32_t{1} << bits; }
    double step() const noexcept { return (hi - lo) / static_cast<double>(levels()); }
};

inline std::vector<std::uint32_t> quantize(std::span<const double> values, const QuantizerSpec& spec) {
    spec.validate();
    const double step = spec.step();
    const auto top = static_cast<double>(spec.levels() - 1);
    std::vector<std::uint32_t> codes(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double cell = std::floor((values[i] - spec.lo) / step);
        codes[i] = static_cast<std::uint32_t>(std::clamp(cell, 0.0, top));
    }
    return codes;
}

inline std::vector<double> dequantize(std::span<const std::uint32_t> codes, const QuantizerSpec& spec) {
    spec.validate();
    const double step = spec.step();
    std::vector<double> out(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i)
        out[i] = spec.lo + (static_cast<double>(std::min(codes[i], spec.levels() - 1)) + 0.5) * step;
    return out;
}

struct BlockHeader {
    std::uint8_t version = kBitstreamVersion;
    std::uint8_t flags = 0;
    std::uint32_t ns = 0;
    std::uint8_t levels = 0;
    std::uint8_t filter_length = 0;
    std::uint8_t qbits = 0;
    double target_cr = 0.0;
    double lo = 0.0;
    double hi = 1.0;

    std::size_t retained() const { return retained_count(target_cr, ns); }
    std::size_t significance_bytes() const noexcept { return (std::size_t{ns} + 7) / 8; }
    std::size_t payload_bits() const { return retained() * qbits; }
    std::size_t payload_bytes() const { return (payload_bits() + 7) / 8; }
    WaveletSpec wavelet() const { return {filter_length, levels}; }
    QuantizerSpec quantizer() const { return {qbits, lo, hi}; }

    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

struct EncodedBlock {
    BlockHeader header;
    std::vector<std::uint8_t> significance; // ceil(ns/8) bytes
    std::vector<std::uint8_t> payload;      // ceil(M*qbits/8) bytes
    std::size_t payload_bit_length = 0;     // M*qbits

    std::size_t retained() const { return header.retained(); }
    // Achieved compression ratio, (1 - M/ns) * 100.
    double compression_ratio() const { return eegdist::compression_ratio(retained(), header.ns); }
    std::size_t total_bytes() const noexcept { return kHeaderBytes + significance.size() + payload.size(); }
    std::size_t total_bits() const noexcept { return total_bytes() * 8; }

    bool significant(std::size_t i) const noexcept { return (significance[i / 8] >> (i % 8)) & 1u; }

    friend bool operator==(const EncodedBlock&, const EncodedBlock&) = default;
};

namespace detail {

class BitWriter {
public:
    void put(std::uint32_t value, int width) {
        for (int b = 0; b < width; ++b, ++bit_) {
            if (bit_ % 8 == 0) bytes_.push_back(0);
            if ((value >> b) & 1u) bytes_.back() |= static_cast<std::uint8_t>(1u << (bit_ % 8));
        }
    }
    std::vector<std::uint8_t> take() && { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bit_ = 0;
};

// Reads qbits-wide codes; bits past the end read as zero.
inline std::uint32_t read_bits(std::span<const std::uint8_t> bytes, std::size_t bit, int width) {
    std::uint32_t v = 0;
    for (int b = 0; b < width; ++b, ++bit) {
        const std::size_t byte = bit / 8;
        if (byte < bytes.size() && ((bytes[byte] >> (bit % 8)) & 1u)) v |= 1u << b;
    }
    return v;
}

template <class T>
void put_le(std::vector<std::uint8_t>& out, T value) {
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    out.insert(out.end(), raw, raw + sizeof(T));
}

template <class T>
T get_le(std::span<const std::uint8_t> in, std::size_t offset) {
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, in.data() + offset, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
}

inline void validate_header(const BlockHeader& h) {
    if (h.version != kBitstreamVersion)
        throw CorruptBlock("unsupported bitstream version " + std::to_string(h.version));
    if (h.qbits < 1 || h.qbits > 16) throw CorruptBlock("invalid qbits " + std::to_string(h.qbits));
    if (!(h.target_cr >= 0.0 && h.target_cr < 100.0)) throw CorruptBlock("invalid target compression ratio");
    if (!(h.lo < h.hi)) throw CorruptBlock("invalid quantizer range");
    try {
        h.wavelet().validate_length(h.ns);
    } catch (const InvalidArgument& e) {
        throw CorruptBlock(std::string("invalid header: ") + e.what());
    }
}

} // namespace detail

inline std::vector<std::uint8_t> serialize(const EncodedBlock& block) {
    const BlockHeader& h = block.header;
    std::vector<std::uint8_t> out;
    out.reserve(block.total_bytes());
    for (char c : {'E', 'E', 'G', 'C'}) out.push_back(static_cast<std::uint8_t>(c));
    out.push_back(h.version);
    out.push_back(h.flags);
    detail::put_le(out, h.ns);
    out.push_back(h.levels);
    out.push_back(h.filter_length);
    out.push_back(h.qbits);
    out.push_back(0);
    detail::put_le(out, h.target_cr);
    detail::put_le(out, h.lo);
    detail::put_le(out, h.hi);
    out.insert(out.end(), block.significance.begin(), block.significance.end());
    out.insert(out.end(), block.payload.begin(), block.payload.end());
    return out;
}

// Parses a serialized block. Strict mode requires the exact byte length;
// lenient mode zero-fills a short body and ignores trailing bytes.
inline EncodedBlock deserialize(std::span<const std::uint8_t> bytes, bool lenient = false) {
    if (bytes.size() < kHeaderBytes) throw CorruptBlock("block shorter than its header");
    if (std::memcmp(bytes.data(), "EEGC", 4) != 0) throw CorruptBlock("bad magic");
    EncodedBlock block;
    BlockHeader& h = block.header;
    h.version = bytes[4];
    h.flags = bytes[5];
    h.ns = detail::get_le<std::uint32_t>(bytes, 6);
    h.levels = bytes[10];
    h.filter_length = bytes[11];
    h.qbits = bytes[12];
    h.target_cr = detail::get_le<double>(bytes, 14);
    h.lo = detail::get_le<double>(bytes, 22);
    h.hi = detail::get_le<double>(bytes, 30);
    detail::validate_header(h);

    const std::size_t sig = h.significance_bytes();
    const std::size_t pay = h.payload_bytes();
    const std::size_t expected = kHeaderBytes + sig + pay;
    if (!lenient && bytes.size() != expected)
        throw CorruptBlock("block is " + std::to_string(bytes.size()) + " bytes, header implies " +
                           std::to_string(expected));
    auto body = bytes.subspan(kHeaderBytes);
    block.significance.assign(sig, 0);
    block.payload.assign(pay, 0);
    std::copy_n(body.begin(), std::min(sig, body.size()), block.significance.begin());
    if (body.size() > sig) {
        auto p = body.subspan(sig);
        std::copy_n(p.begin(), std::min(pay, p.size()), block.payload.begin());
    }
    block.payload_bit_length = h.payload_bits();
    return block;
}

// DWT -> keep-M-largest -> quantize retained values over their own [min, max].
inline EncodedBlock encode(std::span<const double> samples, const WaveletSpec& spec, double cr,
                           int qbits = kDefaultQuantBits) {
    spec.validate_length(samples.size());
    if (qbits < 1 || qbits > 16) throw InvalidArgument("qbits must be in 1..16");
    if (samples.size() > 0xFFFFFFFFull) throw InvalidArgument("signal too long for the bitstream format");
    const CoefficientSet coeffs = threshold_to_ratio(dwt(samples, spec), cr);

    std::vector<double> kept;
    kept.reserve(coeffs.retained());
    for (std::size_t i = 0; i < coeffs.ns(); ++i)
        if (coeffs.keep_mask[i]) kept.push_back(coeffs.values[i]);

    auto [mn, mx] = std::minmax_element(kept.begin(), kept.end());
    double lo = *mn;
    double hi = *mx;
    if (!(lo < hi)) {
        const double pad = std::max(std::abs(lo), 1.0) * 0x1.0p-20;
        lo -= pad;
        hi += pad;
    }

    EncodedBlock block;
    BlockHeader& h = block.header;
    h.ns = static_cast<std::uint32_t>(samples.size());
    h.levels = static_cast<std::uint8_t>(spec.levels);
    h.filter_length = static_cast<std::uint8_t>(spec.filter_length);
    h.qbits = static_cast<std::uint8_t>(qbits);
    h.target_cr = cr;
    h.lo = lo;
    h.hi = hi;

    block.significance.assign(h.significance_bytes(), 0);
    for (std::size_t i = 0; i < coeffs.ns(); ++i)
        if (coeffs.keep_mask[i]) block.significance[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));

    detail::BitWriter writer;
    for (std::uint32_t code : quantize(kept, h.quantizer())) writer.put(code, qbits);
    block.payload = std::move(writer).take();
    block.payload.resize(h.payload_bytes(), 0);
    block.payload_bit_length = h.payload_bits();
    return block;
}

inline EncodedBlock encode(const Signal& signal, const WaveletSpec& spec, double cr, int qbits = kDefaultQuantBits) {
    return encode(signal.samples(), spec, cr, qbits);
}

// Reconstructed samples. With `lenient`, a significance map whose popcount
// differs from M is decoded best-effort: codes go to significant positions in
// order, surplus codes are dropped and surplus positions stay zero.
inline std::vector<double> decode_samples(const EncodedBlock& block, bool lenient = false) {
    const BlockHeader& h = block.header;
    detail::validate_header(h);
    const std::size_t ns = h.ns;
    const std::size_t m = h.retained();
    if (block.significance.size() != h.significance_bytes())
        throw CorruptBlock("significance map size does not match ns");
    if (!lenient && block.payload.size() != h.payload_bytes()) throw CorruptBlock("payload size does not match M");

    std::vector<std::size_t> positions;
    positions.reserve(m);
    for (std::size_t i = 0; i < ns; ++i)
        if (block.significant(i)) positions.push_back(i);
    if (!lenient && positions.size() != m)
        throw CorruptBlock("significance map marks " + std::to_string(positions.size()) +
                           " coefficients, header implies " + std::to_string(m));

    const std::size_t available = block.payload.size() * 8 / h.qbits;
    const std::size_t n = std::min({positions.size(), m, available});
    std::vector<std::uint32_t> codes(n);
    for (std::size_t i = 0; i < n; ++i) codes[i] = detail::read_bits(block.payload, i * h.qbits, h.qbits);
    const std::vector<double> values = dequantize(codes, h.quantizer());

    CoefficientSet coeffs;
    coeffs.levels = h.levels;
    coeffs.values.assign(ns, 0.0);
    coeffs.keep_mask.assign(ns, 0);
    for (std::size_t i = 0; i < n; ++i) {
        coeffs.values[positions[i]] = values[i];
        coeffs.keep_mask[positions[i]] = 1;
    }
    return idwt_samples(coeffs, h.wavelet());
}

inline Signal decode(const EncodedBlock& block, bool lenient = false, double sampling_rate = kDefaultSamplingRate) {
    return Signal(decode_samples(block, lenient), sampling_rate);
}

} // namespace eegdist
