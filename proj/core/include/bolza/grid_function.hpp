#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "bolza/linalg.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

/// Uniform grid lower, lower + h, ..., upper with `count` >= 2 nodes.
struct GridAxis {
    double lower = 0.0;
    double upper = 1.0;
    int count = 2;

    [[nodiscard]] double spacing() const { return (upper - lower) / (count - 1); }
    [[nodiscard]] double at(int i) const { return i == count - 1 ? upper : lower + i * spacing(); }
    [[nodiscard]] std::vector<double> nodes() const;
};

/// Sampled function on a 1-D or 2-D tensor grid. Values may be +inf; in 2-D
/// they are stored with the first axis varying slowest.
class GridFunction {
public:
    GridFunction(std::vector<GridAxis> axes, std::vector<double> values);

    /// Samples fn at every node.
    static GridFunction sample(std::vector<GridAxis> axes, const std::function<double(const Vector&)>& fn);

    [[nodiscard]] int dim() const { return static_cast<int>(axes_.size()); }
    [[nodiscard]] const std::vector<GridAxis>& axes() const { return axes_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    [[nodiscard]] double at(int i) const { return values_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] double at(int i, int j) const {
        return values_[static_cast<std::size_t>(i) * static_cast<std::size_t>(axes_[1].count) +
                       static_cast<std::size_t>(j)];
    }
    /// Coordinates of the node with flat index k.
    [[nodiscard]] Vector node(std::size_t k) const;

    [[nodiscard]] int finiteCount() const;
    /// Second differences along every grid line are >= -tol (1 + |values|).
    [[nodiscard]] bool isConvex(double tol) const;

    /// Multilinear interpolation; +inf when a surrounding node is infinite,
    /// and outside the grid.
    [[nodiscard]] double interpolate(const Vector& z) const;

    /// CSV with header x[,y],value,isFinite.
    void writeCsv(std::ostream& os) const;
    static GridFunction readCsv(std::istream& is);

private:
    std::vector<GridAxis> axes_;
    std::vector<double> values_;
};

/// Discrete Legendre-Fenchel transform max_i { x_i.y - f(x_i) } by the
/// linear-time hull-and-merge scan. The output grid spans the slope range
/// of the input widened by 10%, with the same node counts. Throws
/// DegenerateInput when fewer than 3 nodes are finite or the input is not
/// convex within tol.grid.
GridFunction lltConjugate(const GridFunction& gf, const Tolerances& tol = defaultTolerances());

/// The same transform onto caller-chosen output axes.
GridFunction lltConjugate(const GridFunction& gf, const std::vector<GridAxis>& outputAxes,
                          const Tolerances& tol = defaultTolerances());

/// max_i { x_i y_j - f_i } for sorted x and sorted y; infinite f_i are skipped.
std::vector<double> discreteConjugate1d(const std::vector<double>& x, const std::vector<double>& f,
                                        const std::vector<double>& y);

}  // namespace bolza
