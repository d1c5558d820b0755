#include "aircomp/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace aircomp {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_svg_plot(std::ostream& os, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<PlotSeries>& series,
                    bool log_y) {
    const double width = 760, height = 520;
    const double ml = 70, mr = 160, mt = 40, mb = 55;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            if (s.y[i] > 0.0 || !log_y) {
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    if (log_y && !(ymin > 0.0)) log_y = false;

    auto tx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto ty = [&](double y) {
        const double lo = log_y ? std::log10(ymin) : ymin;
        const double hi = log_y ? std::log10(ymax) : ymax;
        const double v = log_y ? std::log10(y) : y;
        return height - mb - (v - lo) / (hi - lo) * (height - mt - mb);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">" << title
       << "</text>\n";

    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
       << height - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double x = xmin + (xmax - xmin) * i / 5.0;
        os << "<text x=\"" << tx(x) << "\" y=\"" << height - mb + 18
           << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(x) << "</text>\n";
        const double ylo = log_y ? std::log10(ymin) : ymin;
        const double yhi = log_y ? std::log10(ymax) : ymax;
        const double yv = ylo + (yhi - ylo) * i / 5.0;
        const double y = log_y ? std::pow(10.0, yv) : yv;
        os << "<text x=\"" << ml - 6 << "\" y=\"" << ty(y) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(y) << "</text>\n";
        os << "<line x1=\"" << ml << "\" y1=\"" << ty(y) << "\" x2=\"" << width - mr << "\" y2=\""
           << ty(y) << "\" stroke=\"#dddddd\"/>\n";
    }
    os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << (mt + height - mb) / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % 6];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double y = s.y[i];
            if (log_y && !(y > 0.0)) continue;
            os << fmt(tx(s.x[i])) << ',' << fmt(ty(y)) << ' ';
        }
        os << "\"/>\n";
        const double ly = mt + 18.0 * static_cast<double>(si);
        os << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << width - mr + 34
           << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << width - mr + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
           << s.label << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace aircomp
