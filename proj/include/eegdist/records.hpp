#pragma once

// ExperimentRecord and its CSV form:
//   cr,filter_length,data_length,transmission_delay_ms,channel,prd,log_prd
// Reals are written with 17 significant digits, so the text round-trips exactly.

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "signal.hpp"

namespace eegdist {

struct ExperimentRecord {
    double cr = 0.0;                 // achieved compression ratio, percent
    int filter_length = 0;           // F
    std::size_t data_length = 0;     // L, samples
    double transmission_delay = 0.0; // T, ms
    int channel = 0;                 // 0 ideal, 1..4 graded models, >= 5 custom
    double prd = 0.0;                // Ds, percent
    double log_prd = 0.0;            // D; NaN when prd == 0

    friend bool operator==(const ExperimentRecord& a, const ExperimentRecord& b) {
        auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
        return same(a.cr, b.cr) && a.filter_length == b.filter_length && a.data_length == b.data_length &&
               same(a.transmission_delay, b.transmission_delay) && a.channel == b.channel && same(a.prd, b.prd) &&
               same(a.log_prd, b.log_prd);
    }
};

inline constexpr std::array<std::string_view, 7> kRecordColumns{
    "cr", "filter_length", "data_length", "transmission_delay_ms", "channel", "prd", "log_prd"};

inline std::string records_header() {
    std::string h;
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i) {
        if (i) h += ',';
        h += kRecordColumns[i];
    }
    return h;
}

inline void write_records(std::ostream& out, const std::vector<ExperimentRecord>& records) {
    out << records_header() << '\n';
    for (const auto& r : records) {
        out << detail::format_double(r.cr) << ',' << r.filter_length << ',' << r.data_length << ','
            << detail::format_double(r.transmission_delay) << ',' << r.channel << ',' << detail::format_double(r.prd)
            << ',' << detail::format_double(r.log_prd) << '\n';
    }
}

inline void write_records(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_records(out, records);
    if (!out) throw IoError("write failure on '" + path + "'");
}

namespace detail {

inline double parse_real_field(std::string_view text, std::string_view column, std::size_t row) {
    double v = 0.0;
    if (text == "nan" || text == "NaN" || text == "-nan") return std::nan("");
    if (!parse_double(text, v))
        throw ParseError("column '" + std::string(column) + "': cannot parse '" + std::string(text) + "'", row);
    return v;
}

inline long long parse_int_field(std::string_view text, std::string_view column, std::size_t row) {
    double v = parse_real_field(text, column, row);
    if (!std::isfinite(v) || v != std::floor(v))
        throw ParseError("column '" + std::string(column) + "': expected an integer, got '" + std::string(text) + "'",
                         row);
    return static_cast<long long>(v);
}

} // namespace detail

// Parses records CSV. Header problems name the missing column; row errors carry
// the 1-based line number.
inline std::vector<ExperimentRecord> read_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("records CSV is empty (missing header)", 1);
    const auto header = detail::split_csv(line);
    for (auto col : kRecordColumns) {
        bool found = false;
        for (auto h : header) found = found || h == col;
        if (!found) throw ParseError("records CSV is missing column '" + std::string(col) + "'", 1);
    }
    if (header.size() != kRecordColumns.size())
        throw ParseError("records CSV header has unexpected columns; expected '" + records_header() + "'", 1);
    std::array<std::size_t, 7> pos{};
    for (std::size_t c = 0; c < kRecordColumns.size(); ++c)
        for (std::size_t h = 0; h < header.size(); ++h)
            if (header[h] == kRecordColumns[c]) pos[c] = h;

    std::vector<ExperimentRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() != kRecordColumns.size())
            throw ParseError("expected " + std::to_string(kRecordColumns.size()) + " fields, found " +
                                 std::to_string(f.size()),
                             lineno);
        ExperimentRecord r;
        r.cr = detail::parse_real_field(f[pos[0]], kRecordColumns[0], lineno);
        r.filter_length = static_cast<int>(detail::parse_int_field(f[pos[1]], kRecordColumns[1], lineno));
        const long long len = detail::parse_int_field(f[pos[2]], kRecordColumns[2], lineno);
        if (len < 0) throw ParseError("column 'data_length' must be non-negative", lineno);
        r.data_length = static_cast<std::size_t>(len);
        r.transmission_delay = detail::parse_real_field(f[pos[3]], kRecordColumns[3], lineno);
        r.channel = static_cast<int>(detail::parse_int_field(f[pos[4]], kRecordColumns[4], lineno));
        r.prd = detail::parse_real_field(f[pos[5]], kRecordColumns[5], lineno);
        r.log_prd = detail::parse_real_field(f[pos[6]], kRecordColumns[6], lineno);
        records.push_back(r);
    }
    return records;
}

inline std::vector<ExperimentRecord> read_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open records file '" + path + "'");
    return read_records(in);
}

} // namespace eegdist
