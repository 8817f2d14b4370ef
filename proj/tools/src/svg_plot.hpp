#ifndef CTAH_TOOLS_SVG_PLOT_HPP
#define CTAH_TOOLS_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace ctah {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Standalone SVG line plot; output bytes depend only on the inputs.
std::string render_line_plot(const std::vector<PlotSeries>& series, const std::string& x_label,
                             const std::string& y_label);

} // namespace ctah

#endif // CTAH_TOOLS_SVG_PLOT_HPP
