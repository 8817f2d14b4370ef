#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ctah/errors.hpp"

namespace ctah {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 500;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 20;
constexpr int kMarginBottom = 50;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Round a span to a tick step of the form {1,2,5} * 10^k.
double tick_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    if (norm <= 1.0) return mag;
    if (norm <= 2.0) return 2.0 * mag;
    if (norm <= 5.0) return 5.0 * mag;
    return 10.0 * mag;
}

} // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series, const std::string& x_label,
                             const std::string& y_label) {
    if (series.empty()) throw UsageError("plot needs at least one series");
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const PlotSeries& s : series) {
        if (s.x.size() != s.y.size()) throw UsageError("series x/y lengths differ");
        if (s.x.empty()) throw UsageError("series '" + s.label + "' is empty");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                x_min = x_max = s.x[i];
                y_min = y_max = s.y[i];
                first = false;
            } else {
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_min = std::min(y_min, s.y[i]);
                y_max = std::max(y_max, s.y[i]);
            }
        }
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double y) { return kMarginTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    // axes
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";

    const double xs = tick_step(x_max - x_min);
    for (double v = std::ceil(x_min / xs) * xs; v <= x_max + 1e-9 * xs; v += xs) {
        const double px = sx(v);
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kMarginTop + plot_h) << "\" x2=\""
            << fmt(px) << "\" y2=\"" << fmt(kMarginTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kMarginTop + plot_h + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    }
    const double ys = tick_step(y_max - y_min);
    for (double v = std::ceil(y_min / ys) * ys; v <= y_max + 1e-9 * ys; v += ys) {
        const double py = sy(v);
        svg << "<line x1=\"" << fmt(kMarginLeft - 5) << "\" y1=\"" << fmt(py) << "\" x2=\""
            << fmt(kMarginLeft) << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(kMarginLeft - 8) << "\" y=\"" << fmt(py + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }

    svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label << "</text>\n";
    svg << "<text x=\"15\" y=\"" << kMarginTop + plot_h / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
        << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < series[i].x.size(); ++j) {
            if (!std::isfinite(series[i].x[j]) || !std::isfinite(series[i].y[j])) continue;
            svg << fmt(sx(series[i].x[j])) << ',' << fmt(sy(series[i].y[j])) << ' ';
        }
        svg << "\"/>\n";
        const double ly = kMarginTop + 18.0 * static_cast<double>(i) + 12.0;
        svg << "<line x1=\"" << kMarginLeft + plot_w - 150 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
            << kMarginLeft + plot_w - 130 << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kMarginLeft + plot_w - 125 << "\" y=\"" << fmt(ly)
            << "\" font-size=\"12\">" << series[i].label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace ctah
