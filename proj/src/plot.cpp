#include "aeris/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "aeris/types.hpp"

namespace aeris {

namespace {

constexpr double canvas_w = 900, canvas_h = 420;
constexpr double ml = 70, mr = 20, mt = 40, mb = 50;  // margins

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// round tick step to a 1/2/5 decade multiple aiming at ~6 intervals
double tick_step(double range) {
    if (!(range > 0)) return 1.0;
    const double raw = range / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r < 1.5) return mag;
    if (r < 3.5) return 2.0 * mag;
    if (r < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

} // namespace

void write_svg_plot(const std::filesystem::path& path,
                    const std::vector<PlotSeries>& series,
                    const std::vector<PlotMarker>& markers,
                    const PlotOptions& options) {
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    if (options.hline) {
        y_lo = std::min(y_lo, *options.hline);
        y_hi = std::max(y_hi, *options.hline);
    }
    if (x_lo > x_hi) throw IoError("svg plot: no data");
    if (x_lo == x_hi) {
        x_lo -= 1;
        x_hi += 1;
    }
    const double y_pad = (y_hi - y_lo) * 0.06 + 1e-30;
    y_lo -= y_pad;
    y_hi += y_pad;

    const double pw = canvas_w - ml - mr, ph = canvas_h - mt - mb;
    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return mt + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas_w
        << "\" height=\"" << canvas_h << "\" viewBox=\"0 0 " << canvas_w << " "
        << canvas_h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // ticks + grid
    const double xs = tick_step(x_hi - x_lo), ys = tick_step(y_hi - y_lo);
    for (double x = std::ceil(x_lo / xs) * xs; x <= x_hi + 1e-9 * xs; x += xs) {
        out << "<line x1=\"" << px(x) << "\" y1=\"" << mt + ph << "\" x2=\""
            << px(x) << "\" y2=\"" << mt + ph + 5
            << "\" stroke=\"#333\"/>\n<text x=\"" << px(x) << "\" y=\""
            << mt + ph + 18
            << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333\">"
            << fmt(x) << "</text>\n";
    }
    for (double y = std::ceil(y_lo / ys) * ys; y <= y_hi + 1e-9 * ys; y += ys) {
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << ml
            << "\" y2=\"" << py(y) << "\" stroke=\"#333\"/>\n<text x=\""
            << ml - 8 << "\" y=\"" << py(y) + 4
            << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333\">" << fmt(y)
            << "</text>\n";
    }

    if (options.hline) {
        out << "<line x1=\"" << ml << "\" y1=\"" << py(*options.hline)
            << "\" x2=\"" << ml + pw << "\" y2=\"" << py(*options.hline)
            << "\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
        if (!options.hline_label.empty())
            out << "<text x=\"" << ml + pw - 6 << "\" y=\""
                << py(*options.hline) - 5
                << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#888\">"
                << options.hline_label << "</text>\n";
    }

    for (const auto& s : series) {
        if (s.x.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
        out << "\"/>\n";
        if (s.points)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\""
                    << fmt(py(s.y[i])) << "\" r=\"2.5\" fill=\"" << s.color
                    << "\"/>\n";
    }

    for (const auto& m : markers)
        out << "<circle cx=\"" << fmt(px(m.x)) << "\" cy=\"" << fmt(py(m.y))
            << "\" r=\"4\" fill=\"none\" stroke=\"#d62728\" "
               "stroke-width=\"1.5\"/>\n";

    if (!options.title.empty())
        out << "<text x=\"" << canvas_w / 2
            << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\" "
               "fill=\"#111\">"
            << options.title << "</text>\n";
    if (!options.xlabel.empty())
        out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << canvas_h - 12
            << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#111\">"
            << options.xlabel << "</text>\n";
    if (!options.ylabel.empty())
        out << "<text x=\"16\" y=\"" << mt + ph / 2
            << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#111\" "
               "transform=\"rotate(-90 16 "
            << mt + ph / 2 << ")\">" << options.ylabel << "</text>\n";

    double ly = mt + 14;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\""
            << ml + pw - 120 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n<text x=\"" << ml + pw - 114
            << "\" y=\"" << ly + 4 << "\" font-size=\"11\" fill=\"#111\">"
            << s.label << "</text>\n";
        ly += 16;
    }

    out << "</svg>\n";
    if (!out) throw IoError("failed writing " + path.string());
}

} // namespace aeris
