#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aircomp {

/// Minimal line-chart writer for the experiment artifacts. One series per
/// named curve; y is drawn on a log axis when all values are positive.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_svg_plot(std::ostream& os, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<PlotSeries>& series,
                    bool log_y = true);

}  // namespace aircomp
