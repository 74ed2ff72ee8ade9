#pragma once

#include <string>
#include <vector>

namespace gar::svg {

struct Series {
    std::vector<double> x, y;
    std::string color = "#000000";
    std::string label;
    bool line = true;
    bool points = false;
    std::string marker = "circle";  // or "triangle"
};

struct Band {
    std::vector<double> x, lo, hi;
    std::string color = "#bbbbbb";
    std::string label;
};

struct VLine {
    double x = 0.0;
    std::string color = "#000000";
    std::string label;
};

/// Vertical segment at x spanning [lo, hi] (interquartile-range bars).
struct ErrorBar {
    double x = 0.0, lo = 0.0, hi = 0.0;
    std::string color = "#000000";
};

struct Chart {
    std::string title, x_label, y_label;
    std::vector<Band> bands;
    std::vector<Series> series;
    std::vector<VLine> vlines;
    std::vector<ErrorBar> bars;
    int width = 760;
    int height = 480;
};

/// Render a static SVG 1.1 line/band chart. Output is deterministic for
/// identical inputs.
std::string render(const Chart& chart);

void write_file(const std::string& path, const std::string& content);

}  // namespace gar::svg
