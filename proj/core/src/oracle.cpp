#include "bolza/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "bolza/errors.hpp"

namespace bolza {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Free control directions are searched on [-kControlBound, kControlBound].
constexpr double kControlBound = 1e6;

struct Interval {
    double lo = -kInf;
    double hi = kInf;
    [[nodiscard]] bool empty() const { return !(lo <= hi); }
    void intersect(double a, double b) {
        lo = std::max(lo, a);
        hi = std::min(hi, b);
    }
};

// Interval image of a one-dimensional convex set.
Interval intervalOf(const ConvexSet& set) {
    Interval r;
    const Matrix& E = set.equalityRows();
    const Matrix& C = set.inequalityRows();
    for (Eigen::Index i = 0; i < E.rows(); ++i) {
        const double v = set.equalityRhs()(i) / E(i, 0);
        r.intersect(v, v);
    }
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        const double c = C(i, 0), d = set.inequalityRhs()(i);
        if (c > 0) r.hi = std::min(r.hi, d / c);
        if (c < 0) r.lo = std::max(r.lo, d / c);
    }
    return r;
}

// {u | b u in [L, H]}
Interval preimage(double b, double L, double H) {
    if (b > 0) return {L / b, H / b};
    if (b < 0) return {H / b, L / b};
    return L <= 0.0 && 0.0 <= H ? Interval{} : Interval{1.0, 0.0};
}

void truncate(Interval& r) {
    r.lo = std::max(r.lo, -kControlBound);
    r.hi = std::min(r.hi, kControlBound);
}

// Piecewise-linear interpolation over the finite block of a 1-D table.
class Interpolant {
public:
    Interpolant(const GridAxis& axis, const std::vector<double>& values) : axis_(axis), values_(values) {
        for (int j = 0; j < axis.count; ++j) {
            if (!std::isfinite(values[static_cast<std::size_t>(j)])) continue;
            if (first_ < 0) first_ = j;
            last_ = j;
        }
    }

    [[nodiscard]] bool anyFinite() const { return first_ >= 0; }
    [[nodiscard]] double lower() const { return axis_.at(first_); }
    [[nodiscard]] double upper() const { return axis_.at(last_); }

    [[nodiscard]] double operator()(double y) const {
        const double h = axis_.spacing();
        const double eps = 1e-9 * h;
        if (y < lower() - eps || y > upper() + eps) return kInf;
        y = std::clamp(y, lower(), upper());
        const double s = (y - axis_.lower) / h;
        int j = std::clamp(static_cast<int>(std::floor(s)), first_, std::max(first_, last_ - 1));
        if (first_ == last_) return values_[static_cast<std::size_t>(first_)];
        const double t = std::clamp(s - j, 0.0, 1.0);
        const double a = values_[static_cast<std::size_t>(j)], b = values_[static_cast<std::size_t>(j + 1)];
        if (t == 0.0) return a;
        if (t == 1.0) return b;
        return (1.0 - t) * a + t * b;
    }

private:
    GridAxis axis_;
    const std::vector<double>& values_;
    int first_ = -1;
    int last_ = -1;
};

// Minimum of a convex function on [lo, hi] by golden-section search.
template <typename F>
double goldenMin(const F& f, double lo, double hi) {
    if (hi - lo <= 0.0) return f(0.5 * (lo + hi));
    constexpr double r = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < 200 && b - a > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++k) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return std::min({fc, fd, f(lo), f(hi)});
}

std::string formatDouble(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string_view toString(ValueTable::Source s) { return s == ValueTable::Source::DP ? "DP" : "Riccati"; }

GridAxis defaultGridAxis() { return {-5.0, 5.0, 2001}; }

void ValueTable::writeCsv(std::ostream& os, int tau) const {
    os << "# source=" << toString(source) << " tau=" << tau << " grid=";
    for (std::size_t a = 0; a < grid.size(); ++a)
        os << (a == 0 ? "" : ";") << formatDouble(grid[a].lower) << ',' << formatDouble(grid[a].upper) << ','
           << grid[a].count;
    os << '\n';
    at(tau).writeCsv(os);
}

ValueTable gridValueDp(const BolzaProblem& problem, const GridAxis& grid, const Tolerances& tol) {
    require(problem.stateDim() == 1, ErrorCode::UnsupportedClass, "grid DP: scalar state only");
    require(!problem.isMixed(), ErrorCode::UnsupportedClass, "grid DP: LQ class only");
    const int T = problem.horizon();
    const std::vector<double> xs = grid.nodes();

    ValueTable table;
    table.source = ValueTable::Source::DP;
    table.grid = {grid};
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(T + 1));

    const TerminalCost& g = problem.terminal();
    auto& last = rows.back();
    for (double x : xs) last.push_back(g.set.contains(vec({x}), tol.feas) ? 0.5 * g.Qf(0, 0) * x * x : kInf);

    for (int t = T - 1; t >= 0; --t) {
        const StageSpec& s = problem.stage(t);
        const int m = s.m();
        require(m <= 2, ErrorCode::UnsupportedClass, "grid DP: at most two controls");
        require(m == 1 || s.controlSet.isUnconstrained() || s.controlSet.kind() == ConvexSet::Kind::Box,
                ErrorCode::UnsupportedClass, "grid DP: two controls need a box control set");
        const Interpolant next(grid, rows[static_cast<std::size_t>(t + 1)]);
        auto& row = rows[static_cast<std::size_t>(t)];
        row.assign(xs.size(), kInf);
        if (!next.anyFinite()) continue;
        const double F = 1.0 + s.A(0, 0);
        Interval box[2];
        if (m == 1) {
            box[0] = intervalOf(s.controlSet);
        } else {
            for (int i = 0; i < 2; ++i) {
                if (s.controlSet.kind() == ConvexSet::Kind::Box) box[i] = {s.controlSet.lower()(i), s.controlSet.upper()(i)};
            }
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double x = xs[i];
            if (!s.stateSet.contains(vec({x}), tol.feas)) continue;
            const double c0 = F * x + s.phi(0);
            const double L = next.lower() - c0, H = next.upper() - c0;
            double best = kInf;
            if (m == 1) {
                Interval u = box[0];
                const Interval pre = preimage(s.B(0, 0), L, H);
                u.intersect(pre.lo, pre.hi);
                if (u.empty()) continue;
                truncate(u);
                const double b = s.B(0, 0), r = s.R(0, 0);
                best = goldenMin([&](double v) { return 0.5 * r * v * v + next(c0 + b * v); }, u.lo, u.hi);
            } else {
                const double b1 = s.B(0, 0), b2 = s.B(0, 1);
                Interval u2box = box[1];
                truncate(u2box);
                // b1 u1 must leave room for some u2 in its box.
                const double r2lo = std::min(b2 * u2box.lo, b2 * u2box.hi);
                const double r2hi = std::max(b2 * u2box.lo, b2 * u2box.hi);
                Interval u1 = box[0];
                const Interval pre = preimage(b1, L - r2hi, H - r2lo);
                u1.intersect(pre.lo, pre.hi);
                if (u1.empty()) continue;
                truncate(u1);
                const Matrix& R = s.R;
                auto inner = [&](double v1) {
                    Interval u2 = u2box;
                    const Interval p2 = preimage(b2, L - b1 * v1, H - b1 * v1);
                    u2.intersect(p2.lo, p2.hi);
                    if (u2.empty()) return kInf;
                    return goldenMin(
                        [&](double v2) {
                            const double q = 0.5 * (R(0, 0) * v1 * v1 + 2.0 * R(0, 1) * v1 * v2 + R(1, 1) * v2 * v2);
                            return q + next(c0 + b1 * v1 + b2 * v2);
                        },
                        u2.lo, u2.hi);
                };
                best = goldenMin(inner, u1.lo, u1.hi);
            }
            if (std::isfinite(best)) row[i] = 0.5 * s.Q(0, 0) * x * x + best;
        }
    }
    for (int t = 0; t <= T; ++t) {
        table.values.emplace_back(table.grid, rows[static_cast<std::size_t>(t)]);
        if (!table.values.back().isConvex(tol.grid))
            table.warnings.push_back("GridTooCoarse: table for tau=" + std::to_string(t) + " is not convex");
    }
    return table;
}

std::vector<QuadraticValue> riccatiRecursion(const BolzaProblem& problem, const Tolerances& tol) {
    require(problem.isUnconstrained(), ErrorCode::UnsupportedClass,
            "riccati: every set must be the whole space");
    const int n = problem.stateDim();
    const int T = problem.horizon();
    std::vector<QuadraticValue> out(static_cast<std::size_t>(T + 1));
    out.back() = {problem.terminal().Qf, Vector::Zero(n), 0.0};
    const Matrix I = Matrix::Identity(n, n);
    for (int t = T - 1; t >= 0; --t) {
        const StageSpec& st = problem.stage(t);
        const QuadraticValue& nx = out[static_cast<std::size_t>(t + 1)];
        const Matrix S = st.R + st.B.transpose() * nx.P * st.B;
        require(isPositiveDefinite(S, tol.psd), ErrorCode::SingularInnerMatrix, "riccati: R + B'PB is singular");
        const Matrix G = st.B * S.llt().solve(st.B.transpose());
        const Matrix M = nx.P - nx.P * G * nx.P;
        const Matrix F = I + st.A;
        const Vector k = (I - nx.P * G) * nx.s;
        QuadraticValue& cur = out[static_cast<std::size_t>(t)];
        cur.P = st.Q + F.transpose() * M * F;
        cur.P = 0.5 * (cur.P + cur.P.transpose());
        cur.s = F.transpose() * (M * st.phi + k);
        cur.c = nx.c + 0.5 * st.phi.dot(M * st.phi) + k.dot(st.phi) - 0.5 * nx.s.dot(G * nx.s);
    }
    return out;
}

double riccatiValue(const BolzaProblem& problem, int tau, const Vector& xi, const Tolerances& tol) {
    require(tau >= 0 && tau <= problem.horizon(), ErrorCode::InvalidArgument, "riccati: tau out of range");
    require(xi.size() == problem.stateDim(), ErrorCode::DimensionMismatch, "riccati: xi needs length n");
    return riccatiRecursion(problem, tol)[static_cast<std::size_t>(tau)](xi);
}

ValueTable riccatiTable(const BolzaProblem& problem, const std::vector<GridAxis>& grid, const Tolerances& tol) {
    require(static_cast<int>(grid.size()) == problem.stateDim(), ErrorCode::DimensionMismatch,
            "riccati table: one axis per state");
    const auto values = riccatiRecursion(problem, tol);
    ValueTable table;
    table.source = ValueTable::Source::Riccati;
    table.grid = grid;
    for (const auto& v : values) table.values.push_back(GridFunction::sample(grid, [&](const Vector& x) { return v(x); }));
    return table;
}

SubgradientBracket gridSubdifferential(const ValueTable& table, int tau, double xi) {
    const GridFunction& f = table.at(tau);
    require(f.dim() == 1, ErrorCode::UnsupportedClass, "grid subdifferential: 1-D tables only");
    const GridAxis& ax = f.axes()[0];
    const double h = ax.spacing();
    const int i = static_cast<int>(std::lround((xi - ax.lower) / h));
    require(i >= 1 && i + 1 < ax.count, ErrorCode::BoundaryNode, "grid subdifferential: node on the grid boundary");
    const double a = f.at(i - 1), b = f.at(i), c = f.at(i + 1);
    require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c), ErrorCode::BoundaryNode,
            "grid subdifferential: infinite neighbour");
    return {(b - a) / h, (c - b) / h, i};
}

}  // namespace bolza
