#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "okun/errors.hpp"

namespace okun {

/// Input for the scatter chart: observation points split by regime plus one
/// regression line per regime, all in data coordinates.
struct ScatterPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    // point (x, y, regime index 1|2)
    struct Point {
        double x;
        double y;
        int regime;
    };
    std::vector<Point> points;
    // line segments: (x0, y0) -> (x1, y1), one per regime
    struct Line {
        double x0, y0, x1, y1;
        int regime;
    };
    std::vector<Line> lines;
};

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
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

/// Round tick spacing to 1/2/5 times a power of ten.
inline double nice_step(double span) {
    if (span <= 0.0) return 1.0;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step;
    if (frac < 1.5)
        step = 1.0;
    else if (frac < 3.5)
        step = 2.0;
    else if (frac < 7.5)
        step = 5.0;
    else
        step = 10.0;
    return step * mag;
}

} // namespace detail

/// Renders a self-contained SVG document: axes with ticks, scatter points
/// colored by regime, one polyline per regression line.
inline std::string render_svg(const ScatterPlot& plot) {
    if (plot.points.empty())
        throw DataError("nothing to plot: no points");
    const double width = 640, height = 480;
    const double ml = 64, mr = 24, mt = 40, mb = 56; // margins

    double xmin = plot.points[0].x, xmax = xmin, ymin = plot.points[0].y, ymax = ymin;
    for (const auto& p : plot.points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    for (const auto& l : plot.lines) {
        ymin = std::min({ymin, l.y0, l.y1});
        ymax = std::max({ymax, l.y0, l.y1});
    }
    if (xmax - xmin < 1e-12) { xmin -= 1.0; xmax += 1.0; }
    if (ymax - ymin < 1e-12) { ymin -= 1.0; ymax += 1.0; }
    const double xpad = 0.05 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
    xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto sy = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

    const char* colors[2] = {"#1f77b4", "#d62728"};
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + detail::xml_escape(plot.title) + "</text>\n";

    // axes
    s += "<line x1=\"" + detail::fmt2(ml) + "\" y1=\"" + detail::fmt2(height - mb) +
         "\" x2=\"" + detail::fmt2(width - mr) + "\" y2=\"" + detail::fmt2(height - mb) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + detail::fmt2(ml) + "\" y1=\"" + detail::fmt2(mt) + "\" x2=\"" +
         detail::fmt2(ml) + "\" y2=\"" + detail::fmt2(height - mb) + "\" stroke=\"black\"/>\n";

    const double xstep = detail::nice_step(xmax - xmin);
    for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9; t += xstep) {
        s += "<line x1=\"" + detail::fmt2(sx(t)) + "\" y1=\"" + detail::fmt2(height - mb) +
             "\" x2=\"" + detail::fmt2(sx(t)) + "\" y2=\"" + detail::fmt2(height - mb + 5) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::fmt2(sx(t)) + "\" y=\"" + detail::fmt2(height - mb + 20) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
             detail::fmt2(t) + "</text>\n";
    }
    const double ystep = detail::nice_step(ymax - ymin);
    for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9; t += ystep) {
        s += "<line x1=\"" + detail::fmt2(ml - 5) + "\" y1=\"" + detail::fmt2(sy(t)) +
             "\" x2=\"" + detail::fmt2(ml) + "\" y2=\"" + detail::fmt2(sy(t)) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::fmt2(ml - 8) + "\" y=\"" + detail::fmt2(sy(t) + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
             detail::fmt2(t) + "</text>\n";
    }
    s += "<text x=\"" + detail::fmt2((ml + width - mr) / 2) + "\" y=\"" +
         detail::fmt2(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         detail::xml_escape(plot.x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + detail::fmt2((mt + height - mb) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 " + detail::fmt2((mt + height - mb) / 2) + ")\">" +
         detail::xml_escape(plot.y_label) + "</text>\n";

    for (const auto& p : plot.points) {
        const char* color = colors[p.regime == 1 ? 0 : 1];
        s += "<circle cx=\"" + detail::fmt2(sx(p.x)) + "\" cy=\"" + detail::fmt2(sy(p.y)) +
             "\" r=\"3\" fill=\"" + color + "\" fill-opacity=\"0.7\"/>\n";
    }
    for (const auto& l : plot.lines) {
        const char* color = colors[l.regime == 1 ? 0 : 1];
        s += "<polyline points=\"" + detail::fmt2(sx(l.x0)) + "," + detail::fmt2(sy(l.y0)) +
             " " + detail::fmt2(sx(l.x1)) + "," + detail::fmt2(sy(l.y1)) +
             "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace okun
