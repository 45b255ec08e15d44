#include "opinion/svg.hpp"

#include "opinion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace opinion {

namespace {

constexpr int kWidth = 900;
constexpr int kHeight = 520;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 150; // room for the legend
constexpr int kMarginTop = 30;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};
constexpr int kPaletteSize = 10;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// round tick step to 1/2/5 x 10^k
double tick_step(double span, int target_ticks) {
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm <= 1.0)
        step = 1.0;
    else if (norm <= 2.0)
        step = 2.0;
    else if (norm <= 5.0)
        step = 5.0;
    return step * mag;
}

} // namespace

std::string trajectory_svg(const Trajectory& traj) {
    if (traj.samples.empty())
        throw InputError("trajectory has no samples");
    const int n = static_cast<int>(traj.samples.front().x.size());

    double t_min = traj.samples.front().t, t_max = traj.samples.back().t;
    double y_min = traj.samples.front().x.minCoeff();
    double y_max = traj.samples.front().x.maxCoeff();
    for (const auto& s : traj.samples) {
        y_min = std::min(y_min, s.x.minCoeff());
        y_max = std::max(y_max, s.x.maxCoeff());
    }
    if (y_max - y_min < 1e-12) {
        y_max += 1.0;
        y_min -= 1.0;
    }
    if (t_max - t_min < 1e-12)
        t_max = t_min + 1.0;
    // 5% margin around the data
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double t) { return kMarginLeft + (t - t_min) / (t_max - t_min) * plot_w; };
    auto sy = [&](double y) {
        return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";

    // axes
    svg << "  <g stroke=\"#333\" stroke-width=\"1\">\n";
    svg << "    <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n";
    svg << "    <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n";
    svg << "  </g>\n";

    // ticks and grid
    svg << "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    const double tx_step = tick_step(t_max - t_min, 8);
    for (double t = std::ceil(t_min / tx_step) * tx_step; t <= t_max + 1e-9 * tx_step;
         t += tx_step) {
        const double px = sx(t);
        svg << "    <line x1=\"" << fmt(px) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
            << fmt(px) << "\" y2=\"" << kMarginTop + plot_h + 5
            << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
        svg << "    <text x=\"" << fmt(px) << "\" y=\"" << kMarginTop + plot_h + 20
            << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    const double ty_step = tick_step(y_max - y_min, 8);
    for (double y = std::ceil(y_min / ty_step) * ty_step; y <= y_max + 1e-9 * ty_step;
         y += ty_step) {
        const double py = sy(y);
        svg << "    <line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << fmt(py) << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << fmt(py)
            << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
        svg << "    <line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(py) << "\" x2=\""
            << kMarginLeft + plot_w << "\" y2=\"" << fmt(py)
            << "\" stroke=\"#eee\" stroke-width=\"1\"/>\n";
        svg << "    <text x=\"" << kMarginLeft - 10 << "\" y=\"" << fmt(py + 4)
            << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
    }
    svg << "    <text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">t</text>\n";
    svg << "    <text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kMarginTop + plot_h / 2 << ")\">opinion</text>\n";
    svg << "  </g>\n";

    // one polyline per agent
    for (int i = 0; i < n; ++i) {
        svg << "  <polyline fill=\"none\" stroke=\"" << kPalette[i % kPaletteSize]
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& s : traj.samples)
            svg << fmt(sx(s.t)) << "," << fmt(sy(s.x(i))) << " ";
        svg << "\"/>\n";
    }

    // legend
    svg << "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (int i = 0; i < n; ++i) {
        const double ly = kMarginTop + 10 + 18.0 * i;
        svg << "    <line x1=\"" << kWidth - kMarginRight + 15 << "\" y1=\"" << fmt(ly)
            << "\" x2=\"" << kWidth - kMarginRight + 45 << "\" y2=\"" << fmt(ly)
            << "\" stroke=\"" << kPalette[i % kPaletteSize] << "\" stroke-width=\"2\"/>\n";
        svg << "    <text x=\"" << kWidth - kMarginRight + 52 << "\" y=\"" << fmt(ly + 4)
            << "\">agent " << i + 1 << "</text>\n";
    }
    svg << "  </g>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_trajectory_svg(const Trajectory& traj, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write file: " + path.string());
    out << trajectory_svg(traj);
}

} // namespace opinion
