#include "bolza/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "bolza/errors.hpp"

namespace bolza {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string formatDouble(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void validateAxis(const GridAxis& a) {
    require(a.count >= 2, ErrorCode::InvalidArgument, "grid axis needs at least 2 nodes");
    require(std::isfinite(a.lower) && std::isfinite(a.upper) && a.lower < a.upper, ErrorCode::InvalidArgument,
            "grid axis needs finite bounds with lower < upper");
}

std::size_t nodeCount(const std::vector<GridAxis>& axes) {
    std::size_t total = 1;
    for (const auto& a : axes) total *= static_cast<std::size_t>(a.count);
    return total;
}

// Slope range along `axis` over all pairs of finite neighbours.
std::pair<double, double> slopeRange(const GridFunction& gf, int axis) {
    double lo = kInf, hi = -kInf;
    const auto& axes = gf.axes();
    const double h = axes[static_cast<std::size_t>(axis)].spacing();
    auto visit = [&](double a, double b) {
        if (std::isfinite(a) && std::isfinite(b)) {
            const double s = (b - a) / h;
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
    };
    if (gf.dim() == 1) {
        for (int i = 0; i + 1 < axes[0].count; ++i) visit(gf.at(i), gf.at(i + 1));
    } else if (axis == 0) {
        for (int j = 0; j < axes[1].count; ++j)
            for (int i = 0; i + 1 < axes[0].count; ++i) visit(gf.at(i, j), gf.at(i + 1, j));
    } else {
        for (int i = 0; i < axes[0].count; ++i)
            for (int j = 0; j + 1 < axes[1].count; ++j) visit(gf.at(i, j), gf.at(i, j + 1));
    }
    return {lo, hi};
}

GridAxis paddedAxis(std::pair<double, double> range, int count) {
    auto [lo, hi] = range;
    if (!std::isfinite(lo)) {
        // No finite neighbours along this axis: the conjugate is affine in it.
        lo = -1.0;
        hi = 1.0;
    }
    const double width = hi - lo;
    const double pad = width > 0.0 ? 0.1 * width : 0.1 * std::max(1.0, std::abs(lo));
    return {lo - pad, hi + pad, count};
}

}  // namespace

std::vector<double> GridAxis::nodes() const {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = at(i);
    return out;
}

GridFunction::GridFunction(std::vector<GridAxis> axes, std::vector<double> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
    require(axes_.size() == 1 || axes_.size() == 2, ErrorCode::InvalidArgument, "grid function: dimension 1 or 2");
    for (const auto& a : axes_) validateAxis(a);
    require(values_.size() == nodeCount(axes_), ErrorCode::DimensionMismatch,
            "grid function: value count does not match the grid");
    for (double v : values_)
        require(!std::isnan(v) && v != -kInf, ErrorCode::ProperNessViolation,
                "grid function: values must be real or +inf");
}

GridFunction GridFunction::sample(std::vector<GridAxis> axes, const std::function<double(const Vector&)>& fn) {
    for (const auto& a : axes) validateAxis(a);
    std::vector<double> values(nodeCount(axes));
    GridFunction probe(axes, std::vector<double>(values.size(), 0.0));
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = fn(probe.node(k));
    return {std::move(axes), std::move(values)};
}

Vector GridFunction::node(std::size_t k) const {
    if (dim() == 1) return vec({axes_[0].at(static_cast<int>(k))});
    const auto n2 = static_cast<std::size_t>(axes_[1].count);
    return vec({axes_[0].at(static_cast<int>(k / n2)), axes_[1].at(static_cast<int>(k % n2))});
}

int GridFunction::finiteCount() const {
    return static_cast<int>(std::count_if(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }));
}

bool GridFunction::isConvex(double tol) const {
    auto ok = [tol](double a, double b, double c) {
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) return true;
        const double scale = 1.0 + std::max({std::abs(a), std::abs(b), std::abs(c)});
        return a - 2.0 * b + c >= -tol * scale;
    };
    if (dim() == 1) {
        for (int i = 1; i + 1 < axes_[0].count; ++i)
            if (!ok(at(i - 1), at(i), at(i + 1))) return false;
        return true;
    }
    for (int i = 0; i < axes_[0].count; ++i)
        for (int j = 1; j + 1 < axes_[1].count; ++j)
            if (!ok(at(i, j - 1), at(i, j), at(i, j + 1))) return false;
    for (int j = 0; j < axes_[1].count; ++j)
        for (int i = 1; i + 1 < axes_[0].count; ++i)
            if (!ok(at(i - 1, j), at(i, j), at(i + 1, j))) return false;
    return true;
}

double GridFunction::interpolate(const Vector& z) const {
    require(z.size() == dim(), ErrorCode::DimensionMismatch, "grid interpolation: point dimension");
    int idx[2] = {0, 0};
    double frac[2] = {0.0, 0.0};
    for (int a = 0; a < dim(); ++a) {
        const GridAxis& ax = axes_[static_cast<std::size_t>(a)];
        const double h = ax.spacing();
        const double slack = 1e-12 * (1.0 + std::abs(ax.upper) + std::abs(ax.lower));
        if (z(a) < ax.lower - slack || z(a) > ax.upper + slack) return kInf;
        double s = (std::clamp(z(a), ax.lower, ax.upper) - ax.lower) / h;
        int i = std::min(static_cast<int>(std::floor(s)), ax.count - 2);
        idx[a] = i;
        frac[a] = std::clamp(s - i, 0.0, 1.0);
    }
    auto blend = [](double a, double b, double t) {
        if (t == 0.0) return a;
        if (t == 1.0) return b;
        if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
        return (1.0 - t) * a + t * b;
    };
    if (dim() == 1) return blend(at(idx[0]), at(idx[0] + 1), frac[0]);
    const double lo = blend(at(idx[0], idx[1]), at(idx[0], idx[1] + 1), frac[1]);
    const double hi = blend(at(idx[0] + 1, idx[1]), at(idx[0] + 1, idx[1] + 1), frac[1]);
    return blend(lo, hi, frac[0]);
}

void GridFunction::writeCsv(std::ostream& os) const {
    os << (dim() == 1 ? "x,value,isFinite\n" : "x,y,value,isFinite\n");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const Vector z = node(k);
        for (int a = 0; a < dim(); ++a) os << formatDouble(z(a)) << ',';
        os << formatDouble(values_[k]) << ',' << (std::isfinite(values_[k]) ? 1 : 0) << '\n';
    }
}

GridFunction GridFunction::readCsv(std::istream& is) {
    std::string line;
    do {
        require(static_cast<bool>(std::getline(is, line)), ErrorCode::ParseError, "grid csv: missing header");
    } while (!line.empty() && line.front() == '#');
    int columns = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
    require(columns == 3 || columns == 4, ErrorCode::ParseError, "grid csv: expected 3 or 4 columns");
    const int d = columns - 2;
    std::vector<std::pair<std::vector<double>, double>> rows;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::stringstream ss(line);
        std::vector<double> cells;
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                cells.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(ErrorCode::ParseError, "grid csv: bad number '" + cell + "'");
            }
        }
        require(static_cast<int>(cells.size()) == columns, ErrorCode::ParseError, "grid csv: ragged row");
        rows.push_back({std::vector<double>(cells.begin(), cells.begin() + d), cells[static_cast<std::size_t>(d)]});
    }
    std::vector<GridAxis> axes;
    for (int a = 0; a < d; ++a) {
        std::vector<double> coords;
        for (const auto& r : rows) coords.push_back(r.first[static_cast<std::size_t>(a)]);
        std::sort(coords.begin(), coords.end());
        coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
        require(coords.size() >= 2, ErrorCode::ParseError, "grid csv: axis needs 2 distinct coordinates");
        axes.push_back({coords.front(), coords.back(), static_cast<int>(coords.size())});
    }
    require(rows.size() == nodeCount(axes), ErrorCode::ParseError, "grid csv: not a full tensor grid");
    std::sort(rows.begin(), rows.end());
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& r : rows) values.push_back(r.second);
    return {std::move(axes), std::move(values)};
}

std::vector<double> discreteConjugate1d(const std::vector<double>& x, const std::vector<double>& f,
                                        const std::vector<double>& y) {
    // Lower convex hull of the finite samples.
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(f[i])) continue;
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull.back();
            const double cross = (x[b] - x[a]) * (f[i] - f[a]) - (f[b] - f[a]) * (x[i] - x[a]);
            if (cross > 0.0) break;
            hull.pop_back();
        }
        hull.push_back(i);
    }
    std::vector<double> out(y.size(), kInf);
    if (hull.empty()) return out;
    std::size_t k = 0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        auto val = [&](std::size_t h) { return x[hull[h]] * y[j] - f[hull[h]]; };
        // Strict improvement only: ties stay at the smaller abscissa.
        while (k + 1 < hull.size() && val(k + 1) > val(k)) ++k;
        out[j] = val(k);
    }
    return out;
}

GridFunction lltConjugate(const GridFunction& gf, const Tolerances& tol) {
    std::vector<GridAxis> out;
    for (int a = 0; a < gf.dim(); ++a)
        out.push_back(paddedAxis(slopeRange(gf, a), gf.axes()[static_cast<std::size_t>(a)].count));
    return lltConjugate(gf, out, tol);
}

GridFunction lltConjugate(const GridFunction& gf, const std::vector<GridAxis>& outputAxes, const Tolerances& tol) {
    require(gf.finiteCount() >= 3, ErrorCode::DegenerateInput, "llt: fewer than 3 finite nodes");
    require(gf.isConvex(tol.grid), ErrorCode::DegenerateInput, "llt: input is not convex along grid lines");
    require(static_cast<int>(outputAxes.size()) == gf.dim(), ErrorCode::DimensionMismatch,
            "llt: output axes dimension");
    const std::vector<double> x0 = gf.axes()[0].nodes();
    const std::vector<double> y0 = outputAxes[0].nodes();
    if (gf.dim() == 1) return {outputAxes, discreteConjugate1d(x0, gf.values(), y0)};

    const std::vector<double> x1 = gf.axes()[1].nodes();
    const std::vector<double> y1 = outputAxes[1].nodes();
    const std::size_t n0 = x0.size(), n1 = x1.size(), m0 = y0.size(), m1 = y1.size();
    // Inner transform along the second axis, row by row; stored negated.
    std::vector<double> negInner(n0 * m1);
    std::vector<double> row(n1);
    for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) row[j] = gf.values()[i * n1 + j];
        std::vector<double> g = discreteConjugate1d(x1, row, y1);
        for (std::size_t j = 0; j < m1; ++j) negInner[i * m1 + j] = std::isfinite(g[j]) ? -g[j] : kInf;
    }
    std::vector<double> values(m0 * m1);
    std::vector<double> column(n0);
    for (std::size_t j = 0; j < m1; ++j) {
        for (std::size_t i = 0; i < n0; ++i) column[i] = negInner[i * m1 + j];
        std::vector<double> h = discreteConjugate1d(x0, column, y0);
        for (std::size_t i = 0; i < m0; ++i) values[i * m1 + j] = h[i];
    }
    return {outputAxes, std::move(values)};
}

}  // namespace bolza
