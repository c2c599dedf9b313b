#pragma once

// Static SVG charts from experiment records: distortion vs compression ratio
// per filter length, a (cr, F) heat map, and per-channel box plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "experiment.hpp"
#include "records.hpp"

namespace eegdist::svg {

namespace detail {

inline constexpr double kWidth = 720, kHeight = 480;
inline constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;

inline const char* color(std::size_t i) {
    static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % 10];
}

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

struct Axes {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

inline Axes padded(double x0, double x1, double y0, double y1) {
    if (x1 <= x0) { x0 -= 1; x1 += 1; }
    if (y1 <= y0) { y0 -= 1; y1 += 1; }
    const double dy = 0.05 * (y1 - y0);
    return {x0, x1, y0 - dy, y1 + dy};
}

inline void open(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
       << "</text>\n";
}

inline void frame(std::ostringstream& os, const Axes& ax, const std::string& xlabel, const std::string& ylabel,
                  bool numeric_x = true) {
    const double l = ax.px(ax.x0), r = ax.px(ax.x1), b = ax.py(ax.y0), t = ax.py(ax.y1);
    os << "<rect x=\"" << num(l) << "\" y=\"" << num(t) << "\" width=\"" << num(r - l) << "\" height=\""
       << num(b - t) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double yv = ax.y0 + (ax.y1 - ax.y0) * i / 5.0;
        os << "<line x1=\"" << num(l - 5) << "\" y1=\"" << num(ax.py(yv)) << "\" x2=\"" << num(l) << "\" y2=\""
           << num(ax.py(yv)) << "\" stroke=\"black\"/>\n<text x=\"" << num(l - 8) << "\" y=\""
           << num(ax.py(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
        if (numeric_x) {
            const double xv = ax.x0 + (ax.x1 - ax.x0) * i / 5.0;
            os << "<line x1=\"" << num(ax.px(xv)) << "\" y1=\"" << num(b) << "\" x2=\"" << num(ax.px(xv))
               << "\" y2=\"" << num(b + 5) << "\" stroke=\"black\"/>\n<text x=\"" << num(ax.px(xv)) << "\" y=\""
               << num(b + 18) << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
        }
    }
    os << "<text x=\"" << num((l + r) / 2) << "\" y=\"" << num(kHeight - 15) << "\" text-anchor=\"middle\">"
       << escape(xlabel) << "</text>\n"
       << "<text x=\"18\" y=\"" << num((t + b) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << num((t + b) / 2) << ")\">" << escape(ylabel) << "</text>\n";
}

inline void legend(std::ostringstream& os, std::size_t i, const std::string& label, const char* fill) {
    const double x = kWidth - kRight + 15;
    const double y = kTop + 10 + 18.0 * static_cast<double>(i);
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 9) << "\" width=\"12\" height=\"10\" fill=\"" << fill
       << "\"/>\n<text x=\"" << num(x + 18) << "\" y=\"" << num(y) << "\">" << escape(label) << "</text>\n";
}

} // namespace detail

// Mean PRD against compression ratio, one polyline per filter length.
inline std::string lines_chart(std::span<const ExperimentRecord> records) {
    if (records.empty()) throw InvalidArgument("plot: no records");
    std::map<int, std::map<double, std::pair<double, int>>> series;
    for (const auto& r : records) {
        auto& cell = series[r.filter_length][std::round(r.cr * 100) / 100];
        cell.first += r.prd;
        cell.second += 1;
    }
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (auto& [f, pts] : series)
        for (auto& [cr, acc] : pts) {
            const double m = acc.first / acc.second;
            x0 = std::min(x0, cr); x1 = std::max(x1, cr);
            y0 = std::min(y0, m); y1 = std::max(y1, m);
        }
    const auto ax = detail::padded(x0, x1, y0, y1);
    std::ostringstream os;
    detail::open(os, "Distortion vs compression ratio");
    detail::frame(os, ax, "compression ratio Cr (%)", "PRD Ds (%)");
    std::size_t i = 0;
    for (auto& [f, pts] : series) {
        os << "<polyline fill=\"none\" stroke=\"" << detail::color(i) << "\" stroke-width=\"1.5\" points=\"";
        for (auto& [cr, acc] : pts) os << detail::num(ax.px(cr)) << ',' << detail::num(ax.py(acc.first / acc.second)) << ' ';
        os << "\"/>\n";
        detail::legend(os, i, "F = " + std::to_string(f), detail::color(i));
        ++i;
    }
    os << "</svg>\n";
    return os.str();
}

// Heat map of mean log PRD over the (cr, F) grid.
inline std::string surface_chart(std::span<const ExperimentRecord> records) {
    if (records.empty()) throw InvalidArgument("plot: no records");
    std::map<double, std::map<int, std::pair<double, int>>> grid;
    std::vector<int> filters;
    for (const auto& r : records) {
        if (!std::isfinite(r.log_prd)) continue;
        auto& cell = grid[std::round(r.cr * 100) / 100][r.filter_length];
        cell.first += r.log_prd;
        cell.second += 1;
        if (std::find(filters.begin(), filters.end(), r.filter_length) == filters.end())
            filters.push_back(r.filter_length);
    }
    if (grid.empty()) throw InvalidArgument("plot: no records with finite log distortion");
    std::sort(filters.begin(), filters.end());
    double lo = 1e300, hi = -1e300;
    for (auto& [cr, row] : grid)
        for (auto& [f, acc] : row) {
            lo = std::min(lo, acc.first / acc.second);
            hi = std::max(hi, acc.first / acc.second);
        }
    if (hi <= lo) hi = lo + 1;
    const double plot_w = detail::kWidth - detail::kLeft - detail::kRight;
    const double plot_h = detail::kHeight - detail::kTop - detail::kBottom;
    const double cw = plot_w / static_cast<double>(grid.size());
    const double ch = plot_h / static_cast<double>(filters.size());
    std::ostringstream os;
    detail::open(os, "Mean log distortion over (Cr, F)");
    std::size_t ci = 0;
    for (auto& [cr, row] : grid) {
        const double x = detail::kLeft + cw * static_cast<double>(ci);
        for (std::size_t fi = 0; fi < filters.size(); ++fi) {
            auto it = row.find(filters[fi]);
            if (it == row.end()) continue;
            const double t = (it->second.first / it->second.second - lo) / (hi - lo);
            const int red = static_cast<int>(255 * t), blue = static_cast<int>(255 * (1 - t));
            const double y = detail::kHeight - detail::kBottom - ch * static_cast<double>(fi + 1);
            os << "<rect x=\"" << detail::num(x) << "\" y=\"" << detail::num(y) << "\" width=\"" << detail::num(cw)
               << "\" height=\"" << detail::num(ch) << "\" fill=\"rgb(" << red << ",64," << blue << ")\"/>\n";
        }
        os << "<text x=\"" << detail::num(x + cw / 2) << "\" y=\"" << detail::num(detail::kHeight - detail::kBottom + 16)
           << "\" text-anchor=\"middle\">" << detail::tick(cr) << "</text>\n";
        ++ci;
    }
    for (std::size_t fi = 0; fi < filters.size(); ++fi)
        os << "<text x=\"" << detail::num(detail::kLeft - 8) << "\" y=\""
           << detail::num(detail::kHeight - detail::kBottom - ch * (static_cast<double>(fi) + 0.5) + 4)
           << "\" text-anchor=\"end\">" << filters[fi] << "</text>\n";
    os << "<text x=\"" << detail::num(detail::kLeft + plot_w / 2) << "\" y=\"" << detail::kHeight - 15
       << "\" text-anchor=\"middle\">compression ratio Cr (%)</text>\n"
       << "<text x=\"18\" y=\"" << detail::num(detail::kTop + plot_h / 2)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << detail::num(detail::kTop + plot_h / 2)
       << ")\">filter length F</text>\n";
    detail::legend(os, 0, "low " + detail::tick(lo), "rgb(0,64,255)");
    detail::legend(os, 1, "high " + detail::tick(hi), "rgb(255,64,0)");
    os << "</svg>\n";
    return os.str();
}

// Box plots of log PRD per channel id.
inline std::string box_chart(std::span<const ExperimentRecord> records) {
    std::map<int, std::vector<double>> by_channel;
    for (const auto& r : records)
        if (std::isfinite(r.log_prd)) by_channel[r.channel].push_back(r.log_prd);
    if (by_channel.empty()) throw InvalidArgument("plot: no records with finite log distortion");
    std::vector<BoxplotSummary> boxes;
    double lo = 1e300, hi = -1e300;
    for (auto& [id, v] : by_channel) {
        boxes.push_back(boxplot_summary("channel " + std::to_string(id), id, v));
        lo = std::min(lo, boxes.back().min);
        hi = std::max(hi, boxes.back().max);
    }
    const auto ax = detail::padded(0.0, static_cast<double>(boxes.size()), lo, hi);
    std::ostringstream os;
    detail::open(os, "Log distortion by channel model");
    detail::frame(os, ax, "channel", "log PRD", false);
    const double slot = (ax.px(ax.x1) - ax.px(ax.x0)) / static_cast<double>(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const auto& b = boxes[i];
        const double cx = ax.px(0) + slot * (static_cast<double>(i) + 0.5);
        const double half = slot * 0.25;
        os << "<line x1=\"" << detail::num(cx) << "\" y1=\"" << detail::num(ax.py(b.lower_whisker)) << "\" x2=\""
           << detail::num(cx) << "\" y2=\"" << detail::num(ax.py(b.upper_whisker)) << "\" stroke=\"black\"/>\n"
           << "<rect x=\"" << detail::num(cx - half) << "\" y=\"" << detail::num(ax.py(b.q3)) << "\" width=\""
           << detail::num(2 * half) << "\" height=\"" << detail::num(ax.py(b.q1) - ax.py(b.q3)) << "\" fill=\""
           << detail::color(i) << "\" fill-opacity=\"0.5\" stroke=\"black\"/>\n"
           << "<line x1=\"" << detail::num(cx - half) << "\" y1=\"" << detail::num(ax.py(b.median)) << "\" x2=\""
           << detail::num(cx + half) << "\" y2=\"" << detail::num(ax.py(b.median))
           << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        for (double o : b.outliers)
            os << "<circle cx=\"" << detail::num(cx) << "\" cy=\"" << detail::num(ax.py(o))
               << "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n";
        os << "<text x=\"" << detail::num(cx) << "\" y=\"" << detail::num(ax.py(ax.y0) + 18)
           << "\" text-anchor=\"middle\">" << b.channel << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace eegdist::svg
