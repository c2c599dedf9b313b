#pragma once

// Ideal-channel distortion sweep, backward model selection, the channel
// study and distortion prediction from the reduced log-linear model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "channel.hpp"
#include "codec.hpp"
#include "config.hpp"
#include "error.hpp"
#include "metrics.hpp"
#include "records.hpp"
#include "rng.hpp"
#include "signal.hpp"
#include "stats/anova.hpp"
#include "stats/ols.hpp"

namespace eegdist {

namespace detail {

inline std::vector<double> circular_block(std::span<const double> signal, std::size_t offset, std::size_t length) {
    std::vector<double> out(length);
    const std::size_t ns = signal.size();
    for (std::size_t i = 0; i < length; ++i) out[i] = signal[(offset + i) % ns];
    return out;
}

inline double delay_ms(const EncodedBlock& block, double link_rate_bps) {
    return static_cast<double>(block.total_bits()) / link_rate_bps * 1000.0;
}

inline double log_or_nan(double prd, LogBase base) {
    return prd > 0.0 ? log_distortion(prd, base) : std::numeric_limits<double>::quiet_NaN();
}

inline constexpr std::uint64_t kSweepTag = 0x53574545ull;   // offsets and channel seeds of run_sweep
inline constexpr std::uint64_t kStudyTag = 0x43485354ull;   // ... of run_channel_study

} // namespace detail

// Records in canonical (cr, F, L, channel, trial) order. Each cell takes a
// circular block of length L at an offset drawn from
// mix_seed(master, cr index, F index, L index, trial); the channel seed also
// mixes in the channel id.
inline std::vector<ExperimentRecord> run_sweep(const Signal& signal, const SweepConfig& config) {
    config.validate();
    const std::size_t ns = signal.size();
    for (std::size_t l : config.block_lengths)
        if (l > ns)
            throw InvalidArgument("block length " + std::to_string(l) + " exceeds signal length " + std::to_string(ns));

    std::vector<ExperimentRecord> records;
    records.reserve(config.cr_grid.size() * config.filter_lengths.size() * config.block_lengths.size() *
                    config.channels.size() * static_cast<std::size_t>(config.trials));
    const auto trials = static_cast<std::size_t>(config.trials);
    for (std::size_t ci = 0; ci < config.cr_grid.size(); ++ci) {
        for (std::size_t fi = 0; fi < config.filter_lengths.size(); ++fi) {
            const WaveletSpec spec{config.filter_lengths[fi], config.levels};
            for (std::size_t li = 0; li < config.block_lengths.size(); ++li) {
                const std::size_t length = config.block_lengths[li];
                std::vector<std::vector<double>> blocks(trials);
                std::vector<EncodedBlock> encoded(trials);
                for (std::size_t t = 0; t < trials; ++t) {
                    Rng rng(mix_seed({detail::kSweepTag, config.master_seed, ci, fi, li, t}));
                    blocks[t] = detail::circular_block(signal.samples(), rng.below(ns), length);
                    encoded[t] = encode(blocks[t], spec, config.cr_grid[ci], config.qbits);
                }
                for (const auto& ch : config.channels) {
                    for (std::size_t t = 0; t < trials; ++t) {
                        const ChannelModel model{
                            ch.quality, ch.ber,
                            mix_seed({detail::kSweepTag, config.master_seed, ci, fi, li,
                                      static_cast<std::uint64_t>(ch.id), t})};
                        const EncodedBlock received = transmit(encoded[t], model);
                        const auto xr = decode_samples(received, true);
                        ExperimentRecord r;
                        r.cr = encoded[t].compression_ratio();
                        r.filter_length = spec.filter_length;
                        r.data_length = length;
                        r.transmission_delay = detail::delay_ms(encoded[t], config.link_rate_bps);
                        r.channel = ch.id;
                        r.prd = prd(blocks[t], xr);
                        r.log_prd = detail::log_or_nan(r.prd, config.log_base);
                        records.push_back(r);
                    }
                }
            }
        }
    }
    return records;
}

// Regressor names as they appear in fits and reports.
inline constexpr const char* kTermCr = "cr";
inline constexpr const char* kTermFilter = "filter_length";
inline constexpr const char* kTermLength = "data_length";
inline constexpr const char* kTermDelay = "transmission_delay_ms";

inline std::vector<std::string> full_model_terms() { return {kTermCr, kTermFilter, kTermLength, kTermDelay}; }
inline std::vector<std::string> reduced1_terms() { return {kTermCr, kTermFilter, kTermLength}; }
inline std::vector<std::string> reduced2_terms() { return {kTermCr, kTermFilter}; }

inline double record_value(const ExperimentRecord& r, const std::string& term) {
    if (term == kTermCr) return r.cr;
    if (term == kTermFilter) return r.filter_length;
    if (term == kTermLength) return static_cast<double>(r.data_length);
    if (term == kTermDelay) return r.transmission_delay;
    if (term == "channel") return r.channel;
    throw InvalidArgument("unknown regressor '" + term + "'");
}

// Records usable for log-scale regression (prd > 0 with a finite log).
inline std::vector<ExperimentRecord> regression_records(std::span<const ExperimentRecord> records,
                                                        std::size_t* excluded = nullptr) {
    std::vector<ExperimentRecord> out;
    for (const auto& r : records)
        if (r.prd > 0.0 && std::isfinite(r.log_prd)) out.push_back(r);
    if (excluded) *excluded = records.size() - out.size();
    return out;
}

// Infers the log base from the stored (prd, log_prd) pairs.
inline LogBase infer_log_base(std::span<const ExperimentRecord> records) {
    for (const auto& r : records) {
        if (r.prd > 0.0 && std::isfinite(r.log_prd) && std::abs(std::log(r.prd)) > 1e-6) {
            const double ratio = r.log_prd / std::log(r.prd);
            return std::abs(ratio - 1.0) < 1e-6 ? LogBase::Natural : LogBase::Ten;
        }
    }
    return LogBase::Ten;
}

// Fits log_prd on the named terms; zero-distortion records are skipped.
inline stats::RegressionFit fit_log_distortion(std::span<const ExperimentRecord> records,
                                               const std::vector<std::string>& terms) {
    const auto usable = regression_records(records);
    std::vector<stats::Regressor> regs;
    for (const auto& term : terms) {
        stats::Regressor reg{term, {}};
        reg.values.reserve(usable.size());
        for (const auto& r : usable) reg.values.push_back(record_value(r, term));
        regs.push_back(std::move(reg));
    }
    std::vector<double> y;
    y.reserve(usable.size());
    for (const auto& r : usable) y.push_back(r.log_prd);
    auto fit = stats::ols_fit(regs, y, "log_prd");
    fit.log_base = log_base_value(infer_log_base(usable));
    return fit;
}

struct SelectionReport {
    double alpha_keep = 0.05;
    std::vector<std::string> candidate_terms;
    std::size_t n_used = 0;
    std::size_t excluded_zero_prd = 0;
    std::vector<stats::RegressionFit> fits;      // fits[0] is the full model
    std::vector<stats::NestedAnova> step_tests;  // fits[i] vs fits[i+1]
    std::vector<stats::NestedAnova> versus_full; // fits[0] vs fits[i+1]
    std::vector<std::string> dropped;            // in drop order

    const stats::RegressionFit& chosen() const { return fits.back(); }
};

// Backward elimination: repeatedly drops the regressor with the largest
// p-value above alpha_keep, testing each reduced model against its parent and
// against the full model. At least one regressor is always kept.
inline SelectionReport model_selection(std::span<const ExperimentRecord> records, double alpha_keep = 0.05,
                                       std::vector<std::string> terms = full_model_terms()) {
    if (!(alpha_keep > 0.0 && alpha_keep < 1.0)) throw InvalidArgument("alpha_keep must lie in (0, 1)");
    if (terms.empty()) throw InvalidArgument("model_selection: no candidate regressors");
    SelectionReport report;
    report.alpha_keep = alpha_keep;
    report.candidate_terms = terms;
    const auto usable = regression_records(records, &report.excluded_zero_prd);
    report.n_used = usable.size();

    report.fits.push_back(fit_log_distortion(usable, terms));
    while (terms.size() > 1) {
        const auto& current = report.fits.back();
        std::size_t worst = 0;
        double worst_p = -1.0;
        for (std::size_t i = 1; i < current.terms(); ++i) {
            if (current.p_value[i] > worst_p) {
                worst_p = current.p_value[i];
                worst = i;
            }
        }
        if (!(worst_p > alpha_keep)) break;
        const std::string drop = current.term_names[worst];
        terms.erase(std::find(terms.begin(), terms.end(), drop));
        report.dropped.push_back(drop);
        auto reduced = fit_log_distortion(usable, terms);
        report.step_tests.push_back(stats::nested_anova(current, reduced));
        report.versus_full.push_back(stats::nested_anova(report.fits.front(), reduced));
        report.fits.push_back(std::move(reduced));
    }
    return report;
}

struct BoxplotSummary {
    std::string name;
    int channel = 0;
    std::size_t n = 0;
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    double lower_whisker = 0.0, upper_whisker = 0.0; // most extreme points within 1.5 IQR of the box
    std::vector<double> outliers;
};

namespace detail {

// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
inline double sorted_quantile(std::span<const double> sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace detail

inline BoxplotSummary boxplot_summary(std::string name, int channel, std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("boxplot_summary: no values");
    std::sort(values.begin(), values.end());
    BoxplotSummary b;
    b.name = std::move(name);
    b.channel = channel;
    b.n = values.size();
    b.min = values.front();
    b.max = values.back();
    b.q1 = detail::sorted_quantile(values, 0.25);
    b.median = detail::sorted_quantile(values, 0.5);
    b.q3 = detail::sorted_quantile(values, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.lower_whisker = b.max;
    b.upper_whisker = b.min;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
        } else {
            b.lower_whisker = std::min(b.lower_whisker, v);
            b.upper_whisker = std::max(b.upper_whisker, v);
        }
    }
    return b;
}

struct ChannelStudyResult {
    std::vector<ExperimentRecord> records; // (channel, trial) order
    std::vector<stats::Group> groups;      // log_prd per channel
    stats::OneWayAnova anova;
    stats::TukeyResult tukey;
    std::vector<BoxplotSummary> boxplots;
};

// Trial t encodes the block at an offset drawn from mix_seed(master, t), shared
// by every channel; channel c corrupts it with seed mix_seed(master, id(c), t).
inline ChannelStudyResult run_channel_study(const Signal& signal, const ChannelStudyConfig& config) {
    config.validate();
    if (config.block_length > signal.size())
        throw InvalidArgument("block length " + std::to_string(config.block_length) + " exceeds signal length " +
                              std::to_string(signal.size()));
    const WaveletSpec spec{config.filter_length, config.levels};
    const auto trials = static_cast<std::size_t>(config.trials);

    std::vector<std::vector<double>> blocks(trials);
    std::vector<EncodedBlock> encoded(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(mix_seed({detail::kStudyTag, config.master_seed, t}));
        blocks[t] = detail::circular_block(signal.samples(), rng.below(signal.size()), config.block_length);
        encoded[t] = encode(blocks[t], spec, config.cr, config.qbits);
    }

    ChannelStudyResult result;
    for (const auto& ch : config.channels) {
        stats::Group group{ch.name, {}};
        for (std::size_t t = 0; t < trials; ++t) {
            const ChannelModel model{ch.quality, ch.ber,
                                     mix_seed({detail::kStudyTag, config.master_seed,
                                               static_cast<std::uint64_t>(ch.id), t})};
            const auto xr = decode_samples(transmit(encoded[t], model), true);
            ExperimentRecord r;
            r.cr = encoded[t].compression_ratio();
            r.filter_length = config.filter_length;
            r.data_length = config.block_length;
            r.transmission_delay = detail::delay_ms(encoded[t], config.link_rate_bps);
            r.channel = ch.id;
            r.prd = prd(blocks[t], xr);
            r.log_prd = detail::log_or_nan(r.prd, config.log_base);
            result.records.push_back(r);
            if (std::isfinite(r.log_prd)) group.values.push_back(r.log_prd);
        }
        result.boxplots.push_back(boxplot_summary(ch.name, ch.id, group.values));
        result.groups.push_back(std::move(group));
    }
    result.anova = stats::one_way_anova(result.groups);
    result.tukey = stats::tukey_hsd(result.groups, config.conf_level);
    return result;
}

// Reference coefficients of the reduced model D = b0 + b1 * cr + b2 * F
// for an ideal channel (log base 10).
struct PaperModelCoefficients {
    static constexpr double beta0 = -0.46375;
    static constexpr double beta1 = 0.02606;
    static constexpr double beta2 = -0.0081453;
};

struct DistortionModel {
    double beta0 = 0.0;
    double beta1 = 0.0; // per percent of compression ratio
    double beta2 = 0.0; // per filter tap
    double log_base = 10.0;
    std::optional<std::pair<double, double>> cr_range;
    std::optional<std::pair<double, double>> filter_range;

    static DistortionModel paper() {
        return {PaperModelCoefficients::beta0, PaperModelCoefficients::beta1, PaperModelCoefficients::beta2, 10.0,
                std::nullopt, std::nullopt};
    }

    // Requires exactly the terms {intercept, cr, filter_length}.
    static DistortionModel from_fit(const stats::RegressionFit& fit) {
        const auto icept = fit.index_of(stats::kInterceptName);
        const auto icr = fit.index_of(kTermCr);
        const auto ifl = fit.index_of(kTermFilter);
        if (fit.terms() != 3 || !icept || !icr || !ifl)
            throw InvalidArgument("prediction needs a fit with exactly the terms (Intercept), cr, filter_length");
        DistortionModel m;
        m.beta0 = fit.beta[*icept];
        m.beta1 = fit.beta[*icr];
        m.beta2 = fit.beta[*ifl];
        m.log_base = fit.log_base.value_or(10.0);
        if (fit.term_ranges.size() == fit.terms()) {
            m.cr_range = fit.term_ranges[*icr];
            m.filter_range = fit.term_ranges[*ifl];
        }
        return m;
    }
};

struct DistortionPrediction {
    double log_distortion = 0.0; // D
    double prd = 0.0;            // Ds = base^D
    bool extrapolated = false;   // inputs outside the fitted ranges
};

inline DistortionPrediction predict_distortion(const DistortionModel& model, double cr, double filter_length) {
    if (!std::isfinite(cr) || !std::isfinite(filter_length)) throw InvalidArgument("prediction inputs must be finite");
    DistortionPrediction p;
    p.log_distortion = model.beta0 + model.beta1 * cr + model.beta2 * filter_length;
    p.prd = std::pow(model.log_base, p.log_distortion);
    auto outside = [](const std::optional<std::pair<double, double>>& r, double v) {
        return r && (v < r->first || v > r->second);
    };
    p.extrapolated = outside(model.cr_range, cr) || outside(model.filter_range, filter_length);
    return p;
}

} // namespace eegdist
