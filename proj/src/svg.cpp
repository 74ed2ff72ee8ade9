#include "gar/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gar/errors.hpp"

namespace gar::svg {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Extent {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
        double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
};

double nice_step(double range, int target_ticks) {
    double raw = range / std::max(1, target_ticks);
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (raw <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

}  // namespace

std::string render(const Chart& chart) {
    const double ml = 64, mr = 16, mt = 36, mb = 48;
    const double pw = chart.width - ml - mr;
    const double ph = chart.height - mt - mb;

    Extent ex, ey;
    for (const auto& b : chart.bands) {
        for (double v : b.x) ex.add(v);
        for (double v : b.lo) ey.add(v);
        for (double v : b.hi) ey.add(v);
    }
    for (const auto& s : chart.series) {
        for (double v : s.x) ex.add(v);
        for (double v : s.y) ey.add(v);
    }
    for (const auto& v : chart.vlines) ex.add(v.x);
    for (const auto& b : chart.bars) {
        ex.add(b.x);
        ey.add(b.lo);
        ey.add(b.hi);
    }
    ex.pad();
    ey.pad();

    auto px = [&](double x) { return ml + (x - ex.lo) / (ex.hi - ex.lo) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ey.lo) / (ey.hi - ey.lo) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << chart.width
        << "\" height=\"" << chart.height << "\" viewBox=\"0 0 " << chart.width << ' '
        << chart.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    if (!chart.title.empty()) {
        out << "<text x=\"" << chart.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"14\">" << chart.title << "</text>\n";
    }

    // axes and ticks
    double xstep = nice_step(ex.hi - ex.lo, 6);
    double ystep = nice_step(ey.hi - ey.lo, 6);
    out << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#333333\">\n";
    for (double t = std::ceil(ex.lo / xstep) * xstep; t <= ex.hi + 1e-12 * xstep; t += xstep) {
        out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(px(t))
            << "\" y2=\"" << num(mt + ph) << "\" stroke=\"#eeeeee\"/>\n";
        out << "<text x=\"" << num(px(t)) << "\" y=\"" << num(mt + ph + 14)
            << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
    }
    for (double t = std::ceil(ey.lo / ystep) * ystep; t <= ey.hi + 1e-12 * ystep; t += ystep) {
        out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(ml + pw)
            << "\" y2=\"" << num(py(t)) << "\" stroke=\"#eeeeee\"/>\n";
        out << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(py(t) + 3)
            << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }
    out << "</g>\n";
    out << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
        << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

    for (const auto& b : chart.bands) {
        if (b.x.empty()) continue;
        out << "<polygon fill=\"" << b.color << "\" fill-opacity=\"0.45\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < b.x.size(); ++i) {
            out << num(px(b.x[i])) << ',' << num(py(b.hi[i])) << ' ';
        }
        for (std::size_t i = b.x.size(); i-- > 0;) {
            out << num(px(b.x[i])) << ',' << num(py(b.lo[i])) << ' ';
        }
        out << "\"/>\n";
    }

    for (const auto& v : chart.vlines) {
        out << "<line x1=\"" << num(px(v.x)) << "\" y1=\"" << num(mt) << "\" x2=\""
            << num(px(v.x)) << "\" y2=\"" << num(mt + ph) << "\" stroke=\"" << v.color
            << "\" stroke-dasharray=\"4,3\"/>\n";
    }

    for (const auto& b : chart.bars) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) continue;
        out << "<line x1=\"" << num(px(b.x)) << "\" y1=\"" << num(py(b.lo)) << "\" x2=\""
            << num(px(b.x)) << "\" y2=\"" << num(py(b.hi)) << "\" stroke=\"" << b.color
            << "\" stroke-width=\"2\"/>\n";
    }

    for (const auto& s : chart.series) {
        if (s.line && s.x.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i])) continue;
                out << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
            }
            out << "\"/>\n";
        }
        if (s.points) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i])) continue;
                double cx = px(s.x[i]), cy = py(s.y[i]);
                if (s.marker == "triangle") {
                    out << "<polygon fill=\"" << s.color << "\" points=\"" << num(cx) << ','
                        << num(cy - 4) << ' ' << num(cx - 4) << ',' << num(cy + 3) << ' '
                        << num(cx + 4) << ',' << num(cy + 3) << "\"/>\n";
                } else {
                    out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy)
                        << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
                }
            }
        }
    }

    // legend
    double ly = mt + 12;
    for (const auto& s : chart.series) {
        if (s.label.empty()) continue;
        out << "<rect x=\"" << num(ml + pw - 130) << "\" y=\"" << num(ly - 8)
            << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << num(ml + pw - 115) << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
        ly += 16;
    }

    if (!chart.x_label.empty()) {
        out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(mt + ph + 34)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << chart.x_label << "</text>\n";
    }
    if (!chart.y_label.empty()) {
        out << "<text x=\"14\" y=\"" << num(mt + ph / 2)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
            << "transform=\"rotate(-90 14 " << num(mt + ph / 2) << ")\">" << chart.y_label
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

}  // namespace gar::svg
