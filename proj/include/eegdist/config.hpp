#pragma once

// Experiment configuration: an INI-style key = value file.
//
//   [sweep]          cr_grid, filter_lengths, block_lengths, trials, master_seed,
//                    qbits, levels, link_rate_bps, log_base (10 | e), channels
//   [channel_study]  cr, filter_length, block_length, trials, conf_level, channels
//                    (master_seed, qbits, levels, link_rate_bps, log_base
//                    default to the [sweep] values)
//   [channel.NAME]   ber, id
//
// '#' and ';' start comments. Lists are comma separated.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "channel.hpp"
#include "codec.hpp"
#include "error.hpp"
#include "metrics.hpp"
#include "signal.hpp"

namespace eegdist {

struct ChannelSpec {
    std::string name;
    ChannelQuality quality = ChannelQuality::Ideal;
    int id = 0;
    double ber = 0.0;
};

inline ChannelSpec builtin_channel(ChannelQuality q) {
    return {std::string(quality_name(q)), q, channel_id(q), default_ber(q)};
}

inline std::vector<ChannelSpec> default_study_channels() {
    return {builtin_channel(ChannelQuality::VeryGood), builtin_channel(ChannelQuality::Good),
            builtin_channel(ChannelQuality::Bad), builtin_channel(ChannelQuality::VeryBad)};
}

struct SweepConfig {
    std::vector<double> cr_grid{36, 42, 48, 54, 60, 66, 72, 78, 84, 90};
    std::vector<int> filter_lengths{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    std::vector<std::size_t> block_lengths{1024, 2048, 4096};
    int trials = 1;
    std::uint64_t master_seed = 1;
    int qbits = kDefaultQuantBits;
    int levels = kDefaultLevels;
    double link_rate_bps = 250000.0;
    LogBase log_base = LogBase::Ten;
    std::vector<ChannelSpec> channels{builtin_channel(ChannelQuality::Ideal)};

    void validate() const;
};

struct ChannelStudyConfig {
    double cr = 60.0;
    int filter_length = 8;
    std::size_t block_length = 4096;
    int trials = 300;
    std::uint64_t master_seed = 1;
    int qbits = kDefaultQuantBits;
    int levels = kDefaultLevels;
    double link_rate_bps = 250000.0;
    LogBase log_base = LogBase::Ten;
    double conf_level = 0.95;
    std::vector<ChannelSpec> channels = default_study_channels();

    void validate() const;
};

namespace detail {

inline void validate_channels(const std::vector<ChannelSpec>& channels) {
    if (channels.empty()) throw InvalidArgument("channel set must not be empty");
    std::set<std::string> names;
    std::set<int> ids;
    for (const auto& c : channels) {
        ChannelModel{c.quality, c.ber, 0}.validate();
        if (!names.insert(c.name).second) throw InvalidArgument("duplicate channel name '" + c.name + "'");
        if (!ids.insert(c.id).second) throw InvalidArgument("duplicate channel id " + std::to_string(c.id));
    }
}

} // namespace detail

inline void SweepConfig::validate() const {
    if (cr_grid.empty() || filter_lengths.empty() || block_lengths.empty())
        throw InvalidArgument("sweep grids must be non-empty");
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (qbits < 1 || qbits > 16) throw InvalidArgument("qbits must be in 1..16");
    if (!(link_rate_bps > 0.0)) throw InvalidArgument("link_rate_bps must be positive");
    for (double cr : cr_grid) (void)retained_count(cr, 2);
    for (int f : filter_lengths)
        for (std::size_t l : block_lengths) WaveletSpec{f, levels}.validate_length(l);
    detail::validate_channels(channels);
}

inline void ChannelStudyConfig::validate() const {
    if (trials < 2) throw InvalidArgument("channel study needs at least 2 trials per channel");
    if (channels.size() < 2) throw InvalidArgument("channel study needs at least 2 channels");
    if (qbits < 1 || qbits > 16) throw InvalidArgument("qbits must be in 1..16");
    if (!(link_rate_bps > 0.0)) throw InvalidArgument("link_rate_bps must be positive");
    if (!(conf_level > 0.0 && conf_level < 1.0)) throw InvalidArgument("conf_level must lie in (0, 1)");
    (void)retained_count(cr, 2);
    WaveletSpec{filter_length, levels}.validate_length(block_length);
    detail::validate_channels(channels);
}

// Raw sections in file order.
struct IniFile {
    std::vector<std::string> section_order;
    std::map<std::string, std::map<std::string, std::string>> sections;

    const std::string* find(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }
};

inline IniFile parse_ini(std::istream& in) {
    IniFile ini;
    std::string current;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        auto t = detail::trim(std::string_view(line).substr(0, hash));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError("unterminated section header", lineno);
            current = std::string(detail::trim(t.substr(1, t.size() - 2)));
            if (current.empty()) throw ParseError("empty section name", lineno);
            if (!ini.sections.count(current)) ini.section_order.push_back(current);
            ini.sections[current];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", lineno);
        if (current.empty()) throw ParseError("key outside of any section", lineno);
        const std::string key(detail::trim(t.substr(0, eq)));
        if (key.empty()) throw ParseError("empty key", lineno);
        ini.sections[current][key] = std::string(detail::trim(t.substr(eq + 1)));
    }
    return ini;
}

namespace detail {

inline double to_real(const std::string& s, const std::string& key) {
    double v = 0.0;
    if (!parse_double(trim(s), v)) throw ParseError("config key '" + key + "': cannot parse '" + s + "'", 0);
    return v;
}

inline long long to_integer(const std::string& s, const std::string& key) {
    const double v = to_real(s, key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15)
        throw ParseError("config key '" + key + "': expected an integer, got '" + s + "'", 0);
    return static_cast<long long>(v);
}

inline std::vector<std::string> to_list(const std::string& s) {
    std::vector<std::string> out;
    for (auto item : split_csv(s))
        if (!item.empty()) out.emplace_back(item);
    return out;
}

inline LogBase to_log_base(const std::string& s) {
    if (s == "10") return LogBase::Ten;
    if (s == "e" || s == "natural") return LogBase::Natural;
    throw ParseError("log_base must be '10' or 'e', got '" + s + "'", 0);
}

// Channel catalogue: built-ins plus every [channel.NAME] section.
inline std::map<std::string, ChannelSpec> channel_catalogue(const IniFile& ini) {
    std::map<std::string, ChannelSpec> cat;
    for (auto q : {ChannelQuality::Ideal, ChannelQuality::VeryGood, ChannelQuality::Good, ChannelQuality::Bad,
                   ChannelQuality::VeryBad})
        cat[std::string(quality_name(q))] = builtin_channel(q);
    int next_custom = 5;
    for (const auto& section : ini.section_order) {
        if (section.rfind("channel.", 0) != 0) continue;
        const std::string name = section.substr(8);
        if (name.empty()) throw ParseError("channel section without a name", 0);
        ChannelSpec spec;
        if (auto q = parse_quality(name)) {
            spec = builtin_channel(*q);
        } else {
            spec.name = name;
            spec.quality = ChannelQuality::Custom;
            spec.id = next_custom++;
            if (!ini.find(section, "ber")) throw ParseError("custom channel '" + name + "' needs a 'ber' key", 0);
        }
        if (auto v = ini.find(section, "ber")) spec.ber = to_real(*v, section + ".ber");
        if (auto v = ini.find(section, "id")) spec.id = static_cast<int>(to_integer(*v, section + ".id"));
        cat[name] = spec;
    }
    return cat;
}

inline std::vector<ChannelSpec> resolve_channels(const std::map<std::string, ChannelSpec>& cat,
                                                 const std::string& list) {
    std::vector<ChannelSpec> out;
    for (const auto& name : to_list(list)) {
        auto it = cat.find(name);
        if (it == cat.end()) throw ParseError("unknown channel '" + name + "'", 0);
        out.push_back(it->second);
    }
    return out;
}

} // namespace detail

struct ExperimentConfig {
    SweepConfig sweep;
    ChannelStudyConfig study;
};

inline ExperimentConfig parse_config(std::istream& in) {
    const IniFile ini = parse_ini(in);
    static const std::set<std::string> sweep_keys{"cr_grid", "filter_lengths", "block_lengths", "trials",
                                                  "master_seed", "qbits", "levels", "link_rate_bps",
                                                  "log_base", "channels"};
    static const std::set<std::string> study_keys{"cr", "filter_length", "block_length", "trials", "master_seed",
                                                  "qbits", "levels", "link_rate_bps", "log_base", "conf_level",
                                                  "channels"};
    for (const auto& [name, keys] : ini.sections) {
        const std::set<std::string>* allowed = nullptr;
        static const std::set<std::string> channel_keys{"ber", "id"};
        if (name == "sweep") allowed = &sweep_keys;
        else if (name == "channel_study") allowed = &study_keys;
        else if (name.rfind("channel.", 0) == 0) allowed = &channel_keys;
        else throw ParseError("unknown config section [" + name + "]", 0);
        for (const auto& [key, value] : keys)
            if (!allowed->count(key)) throw ParseError("unknown key '" + key + "' in [" + name + "]", 0);
    }

    const auto catalogue = detail::channel_catalogue(ini);
    ExperimentConfig cfg;
    SweepConfig& sw = cfg.sweep;
    auto get = [&](const char* section, const char* key) { return ini.find(section, key); };
    if (auto v = get("sweep", "cr_grid")) {
        sw.cr_grid.clear();
        for (const auto& s : detail::to_list(*v)) sw.cr_grid.push_back(detail::to_real(s, "cr_grid"));
    }
    if (auto v = get("sweep", "filter_lengths")) {
        sw.filter_lengths.clear();
        for (const auto& s : detail::to_list(*v))
            sw.filter_lengths.push_back(static_cast<int>(detail::to_integer(s, "filter_lengths")));
    }
    if (auto v = get("sweep", "block_lengths")) {
        sw.block_lengths.clear();
        for (const auto& s : detail::to_list(*v)) {
            const long long l = detail::to_integer(s, "block_lengths");
            if (l < 2) throw ParseError("block_lengths entries must be >= 2", 0);
            sw.block_lengths.push_back(static_cast<std::size_t>(l));
        }
    }
    if (auto v = get("sweep", "trials")) sw.trials = static_cast<int>(detail::to_integer(*v, "trials"));
    if (auto v = get("sweep", "master_seed"))
        sw.master_seed = static_cast<std::uint64_t>(detail::to_integer(*v, "master_seed"));
    if (auto v = get("sweep", "qbits")) sw.qbits = static_cast<int>(detail::to_integer(*v, "qbits"));
    if (auto v = get("sweep", "levels")) sw.levels = static_cast<int>(detail::to_integer(*v, "levels"));
    if (auto v = get("sweep", "link_rate_bps")) sw.link_rate_bps = detail::to_real(*v, "link_rate_bps");
    if (auto v = get("sweep", "log_base")) sw.log_base = detail::to_log_base(*v);
    if (auto v = get("sweep", "channels")) sw.channels = detail::resolve_channels(catalogue, *v);

    ChannelStudyConfig& st = cfg.study;
    st.master_seed = sw.master_seed;
    st.qbits = sw.qbits;
    st.levels = sw.levels;
    st.link_rate_bps = sw.link_rate_bps;
    st.log_base = sw.log_base;
    st.channels.clear();
    for (const char* name : {"very_good", "good", "bad", "very_bad"}) st.channels.push_back(catalogue.at(name));
    if (auto v = get("channel_study", "cr")) st.cr = detail::to_real(*v, "cr");
    if (auto v = get("channel_study", "filter_length"))
        st.filter_length = static_cast<int>(detail::to_integer(*v, "filter_length"));
    if (auto v = get("channel_study", "block_length")) {
        const long long l = detail::to_integer(*v, "block_length");
        if (l < 2) throw ParseError("block_length must be >= 2", 0);
        st.block_length = static_cast<std::size_t>(l);
    }
    if (auto v = get("channel_study", "trials")) st.trials = static_cast<int>(detail::to_integer(*v, "trials"));
    if (auto v = get("channel_study", "master_seed"))
        st.master_seed = static_cast<std::uint64_t>(detail::to_integer(*v, "master_seed"));
    if (auto v = get("channel_study", "qbits")) st.qbits = static_cast<int>(detail::to_integer(*v, "qbits"));
    if (auto v = get("channel_study", "levels")) st.levels = static_cast<int>(detail::to_integer(*v, "levels"));
    if (auto v = get("channel_study", "link_rate_bps")) st.link_rate_bps = detail::to_real(*v, "link_rate_bps");
    if (auto v = get("channel_study", "log_base")) st.log_base = detail::to_log_base(*v);
    if (auto v = get("channel_study", "conf_level")) st.conf_level = detail::to_real(*v, "conf_level");
    if (auto v = get("channel_study", "channels")) st.channels = detail::resolve_channels(catalogue, *v);
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse_config(in);
}

} // namespace eegdist
