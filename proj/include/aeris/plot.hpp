#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace aeris {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    std::string label;
    bool points = false;  // draw sample dots on top of the line
};

struct PlotMarker {
    double x = 0.0;
    double y = 0.0;
};

struct PlotOptions {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::optional<double> hline;  // dashed reference level
    std::string hline_label;
};

// Self-contained SVG line plot (axes, ticks, legend, optional markers).
void write_svg_plot(const std::filesystem::path& path,
                    const std::vector<PlotSeries>& series,
                    const std::vector<PlotMarker>& markers,
                    const PlotOptions& options);

} // namespace aeris
