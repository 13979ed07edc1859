#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bolza::cli {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0, hi = 1;
};

Range finiteRange(const std::vector<double>& v) {
    Range r{INFINITY, -INFINITY};
    for (double x : v)
        if (std::isfinite(x)) {
            r.lo = std::min(r.lo, x);
            r.hi = std::max(r.hi, x);
        }
    if (!(r.lo <= r.hi)) return {0, 1};
    if (r.hi - r.lo < 1e-300) return {r.lo - 0.5, r.hi + 0.5};
    return r;
}

class Frame {
public:
    Frame(Range x, Range y) : x_(x), y_(y) {}
    [[nodiscard]] double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
    [[nodiscard]] double py(double y) const {
        return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
    }

    void open(std::ostringstream& os, const PlotLabels& labels) const {
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
           << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
           << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
           << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
           << escape(labels.title) << "</text>\n";
    }

    void axes(std::ostringstream& os, const PlotLabels& labels) const {
        const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
        os << "<path d=\"M" << fmt(x0) << ' ' << fmt(y1) << " L" << fmt(x0) << ' ' << fmt(y0) << " L" << fmt(x1) << ' '
           << fmt(y0) << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int k = 0; k <= 4; ++k) {
            const double xv = x_.lo + k * (x_.hi - x_.lo) / 4, yv = y_.lo + k * (y_.hi - y_.lo) / 4;
            os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(y0 + 16) << "\" text-anchor=\"middle\">" << tick(xv)
               << "</text>\n";
            os << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
               << "</text>\n";
        }
        os << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(kHeight - 12) << "\" text-anchor=\"middle\">"
           << escape(labels.x) << "</text>\n";
        os << "<text x=\"16\" y=\"" << fmt((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
           << fmt((y0 + y1) / 2) << ")\">" << escape(labels.y) << "</text>\n";
    }

private:
    Range x_, y_;
};

std::string color(double t) {
    // dark blue to yellow
    const double r = 0.27 + 0.72 * t, g = 0.0 + 0.9 * t, b = 0.33 + 0.1 * t - 0.3 * t * t;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(255 * std::clamp(r, 0.0, 1.0))),
                  static_cast<int>(std::lround(255 * std::clamp(g, 0.0, 1.0))),
                  static_cast<int>(std::lround(255 * std::clamp(b, 0.0, 1.0))));
    return buf;
}

}  // namespace

std::string svgLinePlot(const std::vector<double>& xs, const std::vector<double>& ys, const PlotLabels& labels) {
    const Frame f(finiteRange(xs), finiteRange(ys));
    std::ostringstream os;
    f.open(os, labels);
    f.axes(os, labels);
    std::string path;
    bool pen = false;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!std::isfinite(ys[i])) {
            pen = false;
            continue;
        }
        path += (pen ? " L" : " M") + fmt(f.px(xs[i])) + ' ' + fmt(f.py(ys[i]));
        pen = true;
    }
    if (!path.empty()) os << "<path d=\"" << path.substr(1) << "\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"/>\n";
    os << "</svg>\n";
    return os.str();
}

std::string svgHeatmap(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& values,
                       const PlotLabels& labels) {
    const Frame f(finiteRange(xs), finiteRange(ys));
    const Range v = finiteRange(values);
    std::ostringstream os;
    f.open(os, labels);
    const std::size_t nx = xs.size(), ny = ys.size();
    const double w = nx > 1 ? (f.px(xs[1]) - f.px(xs[0])) : 1.0;
    const double h = ny > 1 ? (f.py(ys[0]) - f.py(ys[1])) : 1.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double val = values[i * ny + j];
            if (!std::isfinite(val)) continue;
            os << "<rect x=\"" << fmt(f.px(xs[i]) - w / 2) << "\" y=\"" << fmt(f.py(ys[j]) - h / 2) << "\" width=\""
               << fmt(w + 0.05) << "\" height=\"" << fmt(h + 0.05) << "\" fill=\"" << color((val - v.lo) / (v.hi - v.lo))
               << "\"/>\n";
        }
    }
    f.axes(os, labels);
    os << "<text x=\"" << fmt(kWidth - kRight) << "\" y=\"24\" text-anchor=\"end\">range [" << tick(v.lo) << ", "
       << tick(v.hi) << "]</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace bolza::cli
