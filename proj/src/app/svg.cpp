#include "ghostfd/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ghostfd::app {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
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

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    [[nodiscard]] double map(double v) const {
        const double x = log ? std::log10(v) : v;
        return (x - lo) / (hi - lo);
    }
};

Axis fit_axis(const std::vector<double>& values, bool log) {
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
        const double x = log ? std::log10(v) : v;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double pad = 0.04 * (hi - lo);
    a.lo = lo - pad;
    a.hi = hi + pad;
    return a;
}

}  // namespace

std::string render_svg(const PlotSpec& spec, int width, int height) {
    const double left = 70, right = 20, top = 40, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;

    std::vector<double> xs, ys;
    for (const auto& s : spec.series)
        for (const auto& [x, y] : s.points)
            if ((!spec.log_x || x > 0) && (!spec.log_y || y > 0) && std::isfinite(x) && std::isfinite(y)) {
                xs.push_back(x);
                ys.push_back(y);
            }
    const Axis ax = fit_axis(xs, spec.log_x);
    const Axis ay = fit_axis(ys, spec.log_y);
    auto px = [&](double x) { return left + ax.map(x) * pw; };
    auto py = [&](double y) { return top + (1.0 - ay.map(y)) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
        << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double fx = ax.lo + (ax.hi - ax.lo) * k / 4.0;
        const double fy = ay.lo + (ay.hi - ay.lo) * k / 4.0;
        const double vx = spec.log_x ? std::pow(10.0, fx) : fx;
        const double vy = spec.log_y ? std::pow(10.0, fy) : fy;
        const double gx = left + pw * k / 4.0, gy = top + ph * (1.0 - k / 4.0);
        out << "<text x=\"" << gx << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << fmt(vx)
            << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">" << fmt(vy) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
        << escape(spec.x_label) << (spec.log_x ? " (log)" : "") << "</text>\n";
    out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + ph / 2 << ")\">" << escape(spec.y_label) << (spec.log_y ? " (log)" : "") << "</text>\n";

    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* colour = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
        std::ostringstream path;
        for (const auto& [x, y] : s.points) {
            if ((spec.log_x && x <= 0) || (spec.log_y && y <= 0) || !std::isfinite(x) || !std::isfinite(y)) continue;
            path << (path.tellp() == 0 ? "M" : " L") << px(x) << "," << py(y);
            if (s.markers)
                out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << colour << "\"/>\n";
        }
        if (path.tellp() > 0)
            out << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 + 14 * si << "\" fill=\"" << colour << "\">"
            << escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace ghostfd::app
