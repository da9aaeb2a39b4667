#include "marisec/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace marisec::plot {

namespace {

constexpr int kW = 860, kH = 520;
constexpr int kL = 80, kR = 30, kT = 50, kB = 60;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad() {
        if (!(lo < hi)) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double m = 0.04 * (hi - lo);
        lo -= m;
        hi += m;
    }
    double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void axes(std::ofstream& out, const std::string& title, const std::string& xlabel,
          const std::string& ylabel, const Range& xr, const Range& yr, const std::string& footnote) {
    out << "<rect x='" << kL << "' y='" << kT << "' width='" << (kW - kL - kR) << "' height='"
        << (kH - kT - kB) << "' fill='none' stroke='#333'/>\n";
    out << "<text x='" << kW / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";
    out << "<text x='" << kW / 2 << "' y='" << kH - 14 << "' text-anchor='middle' font-size='12'>"
        << xlabel << "</text>\n";
    out << "<text x='18' y='" << kH / 2 << "' text-anchor='middle' font-size='12' transform='rotate(-90 18 "
        << kH / 2 << ")'>" << ylabel << "</text>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
        const double px = xr.map(fx, kL, kW - kR);
        out << "<line x1='" << px << "' y1='" << kH - kB << "' x2='" << px << "' y2='" << kH - kB + 5
            << "' stroke='#333'/>\n";
        out << "<text x='" << px << "' y='" << kH - kB + 18 << "' text-anchor='middle' font-size='11'>"
            << fmt(fx) << "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * i / 5.0;
        const double py = yr.map(fy, kH - kB, kT);
        out << "<line x1='" << kL - 5 << "' y1='" << py << "' x2='" << kL << "' y2='" << py
            << "' stroke='#333'/>\n";
        out << "<text x='" << kL - 8 << "' y='" << py + 4 << "' text-anchor='end' font-size='11'>"
            << fmt(fy) << "</text>\n";
    }
    if (!footnote.empty()) {
        out << "<text x='" << kW - kR << "' y='" << kH - 4 << "' text-anchor='end' font-size='9' fill='#777'>"
            << footnote << "</text>\n";
    }
}

} // namespace

void line_chart(const std::string& path, const std::string& title, const std::string& xlabel,
                const std::string& ylabel, const std::vector<Series>& series,
                const std::string& footnote) {
    if (series.empty()) throw std::runtime_error("no series to plot");
    for (const auto& s : series) {
        if (s.x.empty() || s.x.size() != s.y.size())
            throw std::runtime_error("series '" + s.label + "' is empty or ragged");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write figure: " + path);

    Range xr, yr;
    for (const auto& s : series) {
        for (double v : s.x) xr.add(v);
        for (double v : s.y) yr.add(v);
    }
    xr.pad();
    yr.pad();

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    axes(out, title, xlabel, ylabel, xr, yr, footnote);
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kColors[si % 7];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            out << xr.map(s.x[i], kL, kW - kR) << ',' << yr.map(s.y[i], kH - kB, kT) << ' ';
        }
        out << "'/>\n";
        const int ly = kT + 16 + int(si) * 16;
        out << "<line x1='" << kW - kR - 150 << "' y1='" << ly << "' x2='" << kW - kR - 125 << "' y2='"
            << ly << "' stroke='" << color << "' stroke-width='2'/>\n";
        out << "<text x='" << kW - kR - 120 << "' y='" << ly + 4 << "' font-size='11'>" << s.label
            << "</text>\n";
    }
    out << "</svg>\n";
}

void bar_chart(const std::string& path, const std::string& title, const std::string& ylabel,
               const std::vector<std::pair<std::string, double>>& bars, const std::string& footnote) {
    if (bars.empty()) throw std::runtime_error("no bars to plot");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write figure: " + path);

    Range yr;
    yr.add(0.0);
    for (const auto& [_, v] : bars) yr.add(v);
    yr.pad();
    Range xr;
    xr.lo = 0.0;
    xr.hi = double(bars.size());

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    axes(out, title, "", ylabel, xr, yr, footnote);
    const double slot = (kW - kL - kR) / double(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double x0 = kL + slot * (double(i) + 0.2);
        const double w = slot * 0.6;
        const double y0 = yr.map(std::max(0.0, bars[i].second), kH - kB, kT);
        const double y1 = yr.map(std::min(0.0, bars[i].second), kH - kB, kT);
        out << "<rect x='" << x0 << "' y='" << y0 << "' width='" << w << "' height='" << (y1 - y0)
            << "' fill='" << kColors[i % 7] << "'/>\n";
        out << "<text x='" << x0 + w / 2 << "' y='" << kH - kB + 18
            << "' text-anchor='middle' font-size='11'>" << bars[i].first << "</text>\n";
        out << "<text x='" << x0 + w / 2 << "' y='" << y0 - 4 << "' text-anchor='middle' font-size='10'>"
            << fmt(bars[i].second) << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace marisec::plot
