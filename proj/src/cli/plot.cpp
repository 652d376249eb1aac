#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "foam/cli.hpp"

namespace foam {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string render_plot_svg(const Trace& trace, const Scenario& s) {
    if (trace.empty()) throw std::invalid_argument("plot: empty trace");
    const int sectors = s.foam.sectors;
    for (const TraceRow& r : trace) {
        if (static_cast<int>(r.pom.size()) != sectors) {
            throw std::invalid_argument("plot: trace sector count does not match the scenario");
        }
    }

    // World x maps to SVG x and world y to SVG y (downward), which keeps the
    // right-handed-from-above convention of positive y to the right of x.
    const Box& b = s.bounds;
    const double map_w = 1000.0;
    const double scale = map_w / (b.max_corner.x - b.min_corner.x);
    const double map_h = (b.max_corner.y - b.min_corner.y) * scale;
    const double margin = 20.0;
    const double strip_cell_h = 12.0;
    const double strip_h = strip_cell_h * sectors;
    const double total_w = map_w + 2 * margin;
    const double total_h = map_h + strip_h + 3 * margin + 14.0;
    const auto sx = [&](double x) { return num(margin + (x - b.min_corner.x) * scale); };
    const auto sy = [&](double y) { return num(margin + (y - b.min_corner.y) * scale); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(total_w) << "\" height=\""
        << num(total_h) << "\" viewBox=\"0 0 " << num(total_w) << ' ' << num(total_h) << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << num(total_w) << "\" height=\"" << num(total_h)
        << "\" fill=\"white\"/>\n";
    svg << "<rect id=\"bounds\" x=\"" << sx(b.min_corner.x) << "\" y=\"" << sy(b.min_corner.y)
        << "\" width=\"" << num(map_w) << "\" height=\"" << num(map_h)
        << "\" fill=\"#f4f7f0\" stroke=\"#888\"/>\n";

    svg << "<g id=\"obstacles\" fill=\"#6b4f2a\" fill-opacity=\"0.85\">\n";
    for (const Obstacle& o : s.obstacles) {
        if (const auto* c = std::get_if<Circle>(&o)) {
            svg << "<circle cx=\"" << sx(c->center.x) << "\" cy=\"" << sy(c->center.y) << "\" r=\""
                << num(c->radius * scale) << "\"/>\n";
        } else {
            const Box& box = std::get<Box>(o);
            svg << "<rect x=\"" << sx(box.min_corner.x) << "\" y=\"" << sy(box.min_corner.y)
                << "\" width=\"" << num((box.max_corner.x - box.min_corner.x) * scale) << "\" height=\""
                << num((box.max_corner.y - box.min_corner.y) * scale) << "\"/>\n";
        }
    }
    svg << "</g>\n";

    svg << "<line id=\"reference\" x1=\"" << sx(s.start.x) << "\" y1=\"" << sy(s.start.y) << "\" x2=\""
        << sx(s.goal.x) << "\" y2=\"" << sy(s.goal.y)
        << "\" stroke=\"#999\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";

    svg << "<polyline id=\"trajectory\" fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        svg << (i ? " " : "") << sx(trace[i].x) << ',' << sy(trace[i].y);
    }
    svg << "\"/>\n";

    svg << "<circle id=\"start\" cx=\"" << sx(s.start.x) << "\" cy=\"" << sy(s.start.y)
        << "\" r=\"5\" fill=\"#2a9d3a\"/>\n";
    svg << "<circle id=\"goal\" cx=\"" << sx(s.goal.x) << "\" cy=\"" << sy(s.goal.y)
        << "\" r=\"5\" fill=\"#c62828\"/>\n";
    svg << "<circle cx=\"" << sx(s.goal.x) << "\" cy=\"" << sy(s.goal.y) << "\" r=\""
        << num(s.sim.goal_tolerance * scale) << "\" fill=\"none\" stroke=\"#c62828\"/>\n";

    // Heat strip: one column per (decimated) tick, one row per sector.
    const double strip_y = map_h + 2 * margin + 14.0;
    svg << "<text x=\"" << num(margin) << "\" y=\"" << num(strip_y - 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\">fused sector occupancy over time "
           "(rows: sector 1 top .. M bottom)</text>\n";
    const std::size_t columns = std::min<std::size_t>(trace.size(), 500);
    const double cell_w = map_w / static_cast<double>(columns);
    svg << "<g id=\"pom-strip\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t c = 0; c < columns; ++c) {
        const std::size_t row_index = c * trace.size() / columns;
        const TraceRow& r = trace[row_index];
        for (int k = 0; k < sectors; ++k) {
            const double p = std::clamp(r.pom[static_cast<std::size_t>(k)], 0.0, 1.0);
            const int shade = static_cast<int>(std::lround(255.0 * (1.0 - p)));
            char color[16];
            std::snprintf(color, sizeof color, "#ff%02x%02x", shade, shade);
            svg << "<rect x=\"" << num(margin + c * cell_w) << "\" y=\"" << num(strip_y + k * strip_cell_h)
                << "\" width=\"" << num(cell_w + 0.01) << "\" height=\"" << num(strip_cell_h)
                << "\" fill=\"" << color << "\"/>\n";
        }
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace foam
