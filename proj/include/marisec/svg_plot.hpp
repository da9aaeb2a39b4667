#pragma once

#include <string>
#include <vector>

namespace marisec::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal standalone SVG line chart with axes, ticks and a legend.
void line_chart(const std::string& path, const std::string& title, const std::string& xlabel,
                const std::string& ylabel, const std::vector<Series>& series,
                const std::string& footnote = "");

/// Grouped bar chart: one bar per (label, value).
void bar_chart(const std::string& path, const std::string& title, const std::string& ylabel,
               const std::vector<std::pair<std::string, double>>& bars,
               const std::string& footnote = "");

} // namespace marisec::plot
