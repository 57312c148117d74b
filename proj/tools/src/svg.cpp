// SPDX-License-Identifier: Apache-2.0
#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace jumpsde::cli {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

// 1, 2 or 5 times a power of ten, about `count` ticks across [lo, hi].
double tick_step(double lo, double hi, int count) {
    const double raw = (hi - lo) / count;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0}) {
        if (m * mag >= raw) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }

    void settle() {
        if (!std::isfinite(lo)) {
            lo = 0;
            hi = 1;
        }
        if (hi - lo < 1e-12 * std::max(1.0, std::fabs(hi))) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

}  // namespace

std::string render_svg(const Plot& plot) {
    Range xr;
    Range yr;
    for (const auto& s : plot.series) {
        for (double v : s.x) {
            xr.add(v);
        }
        for (double v : s.y) {
            yr.add(v);
        }
    }
    xr.settle();
    yr.settle();
    const double pad = 0.05 * (yr.hi - yr.lo);
    yr.lo -= pad;
    yr.hi += pad;

    const double w = kWidth - kLeft - kRight;
    const double h = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * w; };
    auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * h; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + px(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(plot.title) +
           "</text>\n";

    // Axes and ticks.
    out += "<g stroke=\"#444\" fill=\"none\">\n";
    out += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(w) + "\" height=\"" + px(h) + "\"/>\n";
    out += "</g>\n<g fill=\"#222\">\n";
    const double xs = tick_step(xr.lo, xr.hi, 8);
    for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs) {
        const double x = sx(t);
        out += "<line x1=\"" + px(x) + "\" y1=\"" + px(kTop + h) + "\" x2=\"" + px(x) + "\" y2=\"" + px(kTop + h + 5) +
               "\" stroke=\"#444\"/>";
        out += "<text x=\"" + px(x) + "\" y=\"" + px(kTop + h + 18) + "\" text-anchor=\"middle\">" +
               num(std::fabs(t) < 1e-12 * xs ? 0.0 : t) + "</text>\n";
    }
    const double ys = tick_step(yr.lo, yr.hi, 6);
    for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys) {
        const double y = sy(t);
        out += "<line x1=\"" + px(kLeft - 5) + "\" y1=\"" + px(y) + "\" x2=\"" + px(kLeft) + "\" y2=\"" + px(y) +
               "\" stroke=\"#444\"/>";
        out += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(y + 4) + "\" text-anchor=\"end\">" +
               num(std::fabs(t) < 1e-12 * ys ? 0.0 : t) + "</text>\n";
    }
    out += "<text x=\"" + px(kLeft + w / 2) + "\" y=\"" + px(kHeight - 10) + "\" text-anchor=\"middle\">" +
           escape(plot.x_label) + "</text>\n";
    out += "<text transform=\"translate(16," + px(kTop + h / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           escape(plot.y_label) + "</text>\n";
    out += "</g>\n";

    if (!plot.markers.empty()) {
        out += "<g stroke=\"#bbb\" stroke-dasharray=\"2,3\">\n";
        for (double m : plot.markers) {
            out += "<line x1=\"" + px(sx(m)) + "\" y1=\"" + px(kTop) + "\" x2=\"" + px(sx(m)) + "\" y2=\"" +
                   px(kTop + h) + "\"/>\n";
        }
        out += "</g>\n";
    }

    for (const auto& s : plot.series) {
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"" +
                       (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + points + "\"/>\n";
                points.clear();
            }
        };
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            points += (points.empty() ? "" : " ") + px(sx(s.x[i])) + "," + px(sy(s.y[i]));
        }
        flush();
    }

    double ly = kTop + 14;
    for (const auto& s : plot.series) {
        out += "<line x1=\"" + px(kLeft + 12) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(kLeft + 36) + "\" y2=\"" +
               px(ly - 4) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"" +
               (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>";
        out += "<text x=\"" + px(kLeft + 42) + "\" y=\"" + px(ly) + "\">" + escape(s.name) + "</text>\n";
        ly += 16;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace jumpsde::cli
