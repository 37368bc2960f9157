#include "fairtrade/svg_chart.hpp"

#include "fairtrade/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fairtrade {

namespace {

constexpr double kWidth = 520.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 150.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 52.0;

constexpr std::array<const char*, 7> kPalette = {"#0072BD", "#D95319", "#EDB120", "#7E2F8E",
                                                 "#77AC30", "#4DBEEE", "#A2142F"};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") {
        s = "0.00";
    }
    return s;
}

std::string tick_label(double v, double step)
{
    const int decimals = std::max(0, static_cast<int>(std::ceil(-std::log10(step) - 1e-9)));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, std::abs(v) < step * 1e-9 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& text)
{
    std::string out;
    for (const char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

double nice_step(double span)
{
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac <= 1.0) {
        return mag;
    }
    if (frac <= 2.0) {
        return 2.0 * mag;
    }
    if (frac <= 5.0) {
        return 5.0 * mag;
    }
    return 10.0 * mag;
}

} // namespace

std::pair<double, double> padded_range(const std::vector<Series>& series, bool along_x)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        for (const double v : along_x ? s.x : s.y) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!std::isfinite(lo)) {
        return {0.0, 1.0};
    }
    const double pad = hi > lo ? 0.05 * (hi - lo) : 0.05;
    return {lo - pad, hi + pad};
}

std::string render_svg(const LineChart& chart)
{
    bool any = false;
    for (const auto& s : chart.series) {
        if (s.x.size() != s.y.size()) {
            throw DataError("series '" + s.name + "' has mismatched x and y lengths");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            any = any || (std::isfinite(s.x[i]) && std::isfinite(s.y[i]));
        }
    }
    if (!any) {
        throw DataError("chart '" + chart.title + "' has no data points");
    }
    if (!(chart.x_max > chart.x_min) || !(chart.y_max > chart.y_min)) {
        throw DataError("chart '" + chart.title + "' has an empty axis range");
    }

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - chart.x_min) / (chart.x_max - chart.x_min) * plot_w; };
    const auto py = [&](double y) { return kTop + (chart.y_max - y) / (chart.y_max - chart.y_min) * plot_h; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"20.00\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(chart.title) << "</text>\n";

    // grid and ticks
    const double xs = nice_step(chart.x_max - chart.x_min);
    const double ys = nice_step(chart.y_max - chart.y_min);
    out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double v = std::ceil(chart.x_min / xs) * xs; v <= chart.x_max + xs * 1e-9; v += xs) {
        out << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(v)) << "\" y2=\""
            << num(kTop + plot_h) << "\"/>\n";
    }
    for (double v = std::ceil(chart.y_min / ys) * ys; v <= chart.y_max + ys * 1e-9; v += ys) {
        out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << num(kLeft + plot_w)
            << "\" y2=\"" << num(py(v)) << "\"/>\n";
    }
    out << "</g>\n<g font-size=\"11\" fill=\"#333333\">\n";
    for (double v = std::ceil(chart.x_min / xs) * xs; v <= chart.x_max + xs * 1e-9; v += xs) {
        out << "<text x=\"" << num(px(v)) << "\" y=\"" << num(kTop + plot_h + 16) << "\" text-anchor=\"middle\">"
            << tick_label(v, xs) << "</text>\n";
    }
    for (double v = std::ceil(chart.y_min / ys) * ys; v <= chart.y_max + ys * 1e-9; v += ys) {
        out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
            << tick_label(v, ys) << "</text>\n";
    }
    out << "</g>\n";
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w) << "\" height=\""
        << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 12)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(chart.x_label) << "</text>\n";
    out << "<text x=\"16.00\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
        << "transform=\"rotate(-90 16.00 " << num(kTop + plot_h / 2) << ")\">" << escape(chart.y_label)
        << "</text>\n";

    // curves, clipped to the plot area
    out << "<clipPath id=\"plot\"><rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\"/></clipPath>\n";
    out << "<g clip-path=\"url(#plot)\" fill=\"none\" stroke-width=\"2\">\n";
    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const auto& s = chart.series[k];
        const char* color = s.dashed ? "#000000" : kPalette[k % kPalette.size()];
        std::string points;
        const auto flush = [&] {
            if (!points.empty()) {
                out << "<polyline stroke=\"" << color << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
                    << " points=\"" << points << "\"/>\n";
                points.clear();
            }
        };
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            if (!points.empty()) {
                points += ' ';
            }
            points += num(px(s.x[i])) + ',' + num(py(s.y[i]));
        }
        flush();
    }
    out << "</g>\n";

    // legend
    out << "<g font-size=\"11\">\n";
    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const auto& s = chart.series[k];
        const char* color = s.dashed ? "#000000" : kPalette[k % kPalette.size()];
        const double y = kTop + 10 + 18 * static_cast<double>(k);
        const double x = kLeft + plot_w + 12;
        out << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 22) << "\" y2=\"" << num(y)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
            << "/>\n";
        out << "<text x=\"" << num(x + 28) << "\" y=\"" << num(y + 4) << "\">" << escape(s.name) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

} // namespace fairtrade
