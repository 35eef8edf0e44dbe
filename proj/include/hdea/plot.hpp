#pragma once

/// @file plot.hpp
/// @brief SVG chart of mean best fitness against k, one series per
/// algorithm, with max/min error bars.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "harness.hpp"

namespace hdea {

struct PlotSeries {
    std::string label;
    std::string colour;
    std::vector<double> mean;
    std::vector<double> min;
    std::vector<double> max;
};

struct PlotSpec {
    std::string title;
    std::string x_label = "K";
    std::string y_label = "Fitness";
    std::vector<double> x;
    std::vector<PlotSeries> series;
};

/// Builds the chart data from a summary. Only algorithms present at every k
/// get a series, so all series share the x axis.
inline PlotSpec make_plot_spec(const ComparisonSummary& s) {
    if (s.rows.empty()) throw ParameterError("plot: summary has no rows");
    PlotSpec spec;
    if (s.task == Task::nk)
        spec.title = "NK, N=" + std::to_string(s.n);
    else
        spec.title = "RBNK, R=" + std::to_string(s.r) + ", B=" + std::to_string(s.b) + ", N=" + std::to_string(s.n);
    for (const auto& row : s.rows) spec.x.push_back(static_cast<double>(row.k));

    struct Pick {
        const char* label;
        const char* colour;
        std::optional<CellStats> KComparison::*cell;
    };
    const Pick picks[] = {{"HD-EA", "#c0392b", &KComparison::hdea}, {"H-EA", "#2c3e50", &KComparison::hea}};
    for (const auto& pick : picks) {
        const bool everywhere = std::all_of(s.rows.begin(), s.rows.end(), [&](const KComparison& r) { return (r.*pick.cell).has_value(); });
        if (!everywhere) continue;
        PlotSeries ser{pick.label, pick.colour, {}, {}, {}};
        for (const auto& row : s.rows) {
            const auto& c = *(row.*pick.cell);
            ser.mean.push_back(c.mean);
            ser.min.push_back(c.min);
            ser.max.push_back(c.max);
        }
        spec.series.push_back(std::move(ser));
    }
    if (spec.series.empty()) throw ParameterError("plot: no algorithm has data at every k");
    return spec;
}

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

inline std::string render_svg(const PlotSpec& spec) {
    if (spec.x.empty() || spec.series.empty()) throw ParameterError("plot: nothing to draw");
    for (const auto& s : spec.series)
        if (s.mean.size() != spec.x.size() || s.min.size() != spec.x.size() || s.max.size() != spec.x.size())
            throw ParameterError("plot: series length differs from the x axis");

    constexpr double width = 640, height = 420;
    constexpr double left = 70, right = 20, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_lo = *std::min_element(spec.x.begin(), spec.x.end());
    double x_hi = *std::max_element(spec.x.begin(), spec.x.end());
    if (x_hi == x_lo) {
        x_lo -= 1.0;
        x_hi += 1.0;
    }
    const double x_pad = 0.05 * (x_hi - x_lo);
    x_lo -= x_pad;
    x_hi += x_pad;

    double y_lo = 1.0, y_hi = 0.0;
    for (const auto& s : spec.series) {
        y_lo = std::min(y_lo, *std::min_element(s.min.begin(), s.min.end()));
        y_hi = std::max(y_hi, *std::max_element(s.max.begin(), s.max.end()));
    }
    if (y_hi - y_lo < 1e-9) {
        y_lo -= 0.05;
        y_hi += 0.05;
    }
    const double y_pad = 0.08 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };
    using detail::fmt2;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" viewBox=\"0 0 640 420\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"420\" fill=\"white\"/>\n";
    out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           detail::xml_escape(spec.title) + "</text>\n";

    // axes
    out += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    out += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(top + plot_h) + "\" x2=\"" + fmt2(left + plot_w) + "\" y2=\"" +
           fmt2(top + plot_h) + "\"/>\n";
    out += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(top) + "\" x2=\"" + fmt2(left) + "\" y2=\"" + fmt2(top + plot_h) +
           "\"/>\n";
    out += "</g>\n";

    out += "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double x : spec.x) {
        out += "<line x1=\"" + fmt2(px(x)) + "\" y1=\"" + fmt2(top + plot_h) + "\" x2=\"" + fmt2(px(x)) + "\" y2=\"" +
               fmt2(top + plot_h + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt2(px(x)) + "\" y=\"" + fmt2(top + plot_h + 18) + "\" text-anchor=\"middle\">" +
               detail::fmt_tick(x) + "</text>\n";
    }
    constexpr int y_ticks = 5;
    for (int i = 0; i <= y_ticks; ++i) {
        const double y = y_lo + (y_hi - y_lo) * i / y_ticks;
        out += "<line x1=\"" + fmt2(left - 5) + "\" y1=\"" + fmt2(py(y)) + "\" x2=\"" + fmt2(left) + "\" y2=\"" +
               fmt2(py(y)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt2(left - 8) + "\" y=\"" + fmt2(py(y) + 4) + "\" text-anchor=\"end\">" +
               detail::fmt_tick(y) + "</text>\n";
    }
    out += "</g>\n";
    out += "<text x=\"" + fmt2(left + plot_w / 2) + "\" y=\"" + fmt2(height - 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + detail::xml_escape(spec.x_label) +
           "</text>\n";
    out += "<text x=\"18\" y=\"" + fmt2(top + plot_h / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" transform=\"rotate(-90 18 " + fmt2(top + plot_h / 2) + ")\">" +
           detail::xml_escape(spec.y_label) + "</text>\n";

    // series are nudged sideways so their error bars do not overlap
    const double nudge_step = 6.0;
    const double nudge0 = -nudge_step * static_cast<double>(spec.series.size() - 1) / 2.0;
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const double nudge = nudge0 + nudge_step * static_cast<double>(si);
        out += "<g class=\"series\" data-label=\"" + detail::xml_escape(s.label) + "\">\n";
        out += "<polyline fill=\"none\" stroke=\"" + s.colour + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < spec.x.size(); ++i)
            out += (i ? " " : "") + fmt2(px(spec.x[i]) + nudge) + "," + fmt2(py(s.mean[i]));
        out += "\"/>\n";
        for (std::size_t i = 0; i < spec.x.size(); ++i) {
            const double x = px(spec.x[i]) + nudge;
            const double y_min = py(s.min[i]);
            const double y_max = py(s.max[i]);
            out += "<g class=\"errorbar\" stroke=\"" + s.colour + "\">";
            out += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(y_min) + "\" x2=\"" + fmt2(x) + "\" y2=\"" + fmt2(y_max) + "\"/>";
            out += "<line x1=\"" + fmt2(x - 3) + "\" y1=\"" + fmt2(y_min) + "\" x2=\"" + fmt2(x + 3) + "\" y2=\"" + fmt2(y_min) + "\"/>";
            out += "<line x1=\"" + fmt2(x - 3) + "\" y1=\"" + fmt2(y_max) + "\" x2=\"" + fmt2(x + 3) + "\" y2=\"" + fmt2(y_max) + "\"/>";
            out += "</g>\n";
            out += "<circle cx=\"" + fmt2(x) + "\" cy=\"" + fmt2(py(s.mean[i])) + "\" r=\"2.5\" fill=\"" + s.colour + "\"/>\n";
        }
        out += "</g>\n";
    }

    // legend
    out += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const double y = top + 12 + 16 * static_cast<double>(si);
        const double x = left + plot_w - 90;
        out += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(y) + "\" x2=\"" + fmt2(x + 20) + "\" y2=\"" + fmt2(y) +
               "\" stroke=\"" + spec.series[si].colour + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fmt2(x + 26) + "\" y=\"" + fmt2(y + 4) + "\">" + detail::xml_escape(spec.series[si].label) +
               "</text>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

} // namespace hdea
