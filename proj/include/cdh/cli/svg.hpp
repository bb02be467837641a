#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace cdh::cli {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 720;
    int height = 480;
};

namespace detail {

inline std::string fmt(double v, const char* f = "%.2f") {
    char buf[32];
    std::snprintf(buf, sizeof buf, f, v);
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

}  // namespace detail

/// Line chart as a standalone SVG document: axes with five ticks each,
/// polylines, legend. Non-positive values are dropped on log axes.
inline std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
    auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0.0) && (!spec.log_y || y > 0.0);
    };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k)
            if (usable(s.x[k], s.y[k])) {
                x0 = std::min(x0, tx(s.x[k]));
                x1 = std::max(x1, tx(s.x[k]));
                y0 = std::min(y0, ty(s.y[k]));
                y1 = std::max(y1, ty(s.y[k]));
            }
    if (!(x1 > x0)) { x0 = 0.0; x1 = 1.0; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
    const double left = 70, right = 170, top = 40, bottom = 55;
    const double pw = spec.width - left - right, ph = spec.height - top - bottom;
    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << detail::escape(spec.title) << "</text>\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
        const double sx = left + pw * i / 4.0, sy = top + ph - ph * i / 4.0;
        const std::string lx = spec.log_x ? "1e" + detail::fmt(fx, "%.1f") : detail::fmt(fx, "%.3g");
        const std::string ly = spec.log_y ? "1e" + detail::fmt(fy, "%.1f") : detail::fmt(fy, "%.3g");
        o << "<line x1=\"" << detail::fmt(sx) << "\" y1=\"" << top + ph << "\" x2=\"" << detail::fmt(sx) << "\" y2=\""
          << top + ph + 5 << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << detail::fmt(sx) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << lx
          << "</text>\n";
        o << "<line x1=\"" << left - 5 << "\" y1=\"" << detail::fmt(sy) << "\" x2=\"" << left << "\" y2=\""
          << detail::fmt(sy) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << left - 8 << "\" y=\"" << detail::fmt(sy + 4) << "\" text-anchor=\"end\">" << ly
          << "</text>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << spec.height - 12 << "\" text-anchor=\"middle\">"
      << detail::escape(spec.x_label) << "</text>\n";
    o << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">" << detail::escape(spec.y_label) << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* colour = colours[i % 8];
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!usable(s.x[k], s.y[k])) continue;
            o << (first ? "" : " ") << detail::fmt(px(s.x[k])) << ',' << detail::fmt(py(s.y[k]));
            first = false;
        }
        o << "\"/>\n";
        const double ly = top + 12 + 18.0 * static_cast<double>(i);
        o << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << detail::fmt(ly) << "\" x2=\"" << left + pw + 36
          << "\" y2=\"" << detail::fmt(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << left + pw + 42 << "\" y=\"" << detail::fmt(ly + 4) << "\">" << detail::escape(s.label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

inline void write_svg(const std::string& path, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << render_svg(spec, series);
}

}  // namespace cdh::cli
