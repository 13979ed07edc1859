#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bolza/grid_function.hpp"
#include "bolza/problem.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

/// theta_tau sampled on a grid for tau = 0..T (entry T is the terminal cost).
struct ValueTable {
    enum class Source { DP, Riccati };

    Source source = Source::DP;
    std::vector<GridAxis> grid;
    std::vector<GridFunction> values;
    /// GridTooCoarse notes: stages whose table lost convexity.
    std::vector<std::string> warnings;

    [[nodiscard]] const GridFunction& at(int tau) const { return values.at(static_cast<std::size_t>(tau)); }

    /// One table: a "# source=... tau=... grid=..." line, then the grid CSV.
    void writeCsv(std::ostream& os, int tau) const;
};

std::string_view toString(ValueTable::Source s);

/// Default oracle grid: [-5, 5] with 2001 nodes.
GridAxis defaultGridAxis();

/// Backward recursion on a scalar state grid:
///   theta_t(x) = min_u { 0.5 Q x^2 + 0.5 u'Ru + theta_{t+1}((1 + A) x + B u + phi) },
/// over u in U_t, with theta_{t+1} linearly interpolated (+inf off the
/// grid and outside X_t). The inner minimum is a convex one-dimensional
/// (or nested two-dimensional) golden-section search over the control
/// interval on which the interpolated value is finite.
///
/// Requires n = 1, m <= 2, the LQ class, and for m = 2 a box control set.
/// Interpolation error is O(h^2 max|theta''|) per stage where theta is
/// smooth and O(h max|theta'|) near kinks.
ValueTable gridValueDp(const BolzaProblem& problem, const GridAxis& grid = defaultGridAxis(),
                       const Tolerances& tol = defaultTolerances());

/// theta_tau(xi) = 0.5 xi'P xi + s.xi + c for the unconstrained LQ class.
struct QuadraticValue {
    Matrix P;
    Vector s;
    double c = 0.0;

    [[nodiscard]] double operator()(const Vector& xi) const { return 0.5 * xi.dot(P * xi) + s.dot(xi) + c; }
};

/// Backward Riccati recursion with drift, F = I + A, S = R + B'P'B,
/// G = B S^{-1} B', M = P' - P'GP':
///   P = Q + F'MF,  s = F'M phi + F'(I - P'G)s',
///   c = c' + 0.5 phi'M phi + s'(I - GP') phi - 0.5 s''Gs'.
/// Throws SingularInnerMatrix when S is not positive definite and
/// UnsupportedClass when some set is constrained or a stage is mixed.
std::vector<QuadraticValue> riccatiRecursion(const BolzaProblem& problem, const Tolerances& tol = defaultTolerances());

double riccatiValue(const BolzaProblem& problem, int tau, const Vector& xi,
                    const Tolerances& tol = defaultTolerances());

/// Riccati values sampled on a 1-D or 2-D grid for every tau.
ValueTable riccatiTable(const BolzaProblem& problem, const std::vector<GridAxis>& grid,
                        const Tolerances& tol = defaultTolerances());

struct SubgradientBracket {
    double lower = 0.0;
    double upper = 0.0;
    int node = 0;
};

/// Left and right difference quotients of theta_tau at the grid node
/// nearest to xi (1-D tables). Throws BoundaryNode at the grid edge or
/// next to an infinite node.
SubgradientBracket gridSubdifferential(const ValueTable& table, int tau, double xi);

}  // namespace bolza
