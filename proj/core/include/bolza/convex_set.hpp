#pragma once

#include <iosfwd>

#include "bolza/convex_program.hpp"
#include "bolza/linalg.hpp"

namespace bolza {

/// Closed convex nonempty set: the whole space, a box (infinite bounds
/// allowed) or a polyhedron {z | Cz <= d}.
///
/// Every set also carries a normalized H-representation split into
/// equalities (degenerate box coordinates, implicit equalities of a
/// polyhedron) and unit-norm inequalities. Relative-interior tests use it.
class ConvexSet {
public:
    enum class Kind { WholeSpace, Box, Polyhedron };

    ConvexSet() : ConvexSet(wholeSpace(1)) {}

    static ConvexSet wholeSpace(int dim);
    static ConvexSet box(Vector lower, Vector upper);
    static ConvexSet polyhedron(Matrix C, Vector d);
    static ConvexSet point(const Vector& z) { return box(z, z); }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return dim_; }

    // Raw data as given (box bounds or polyhedron rows).
    [[nodiscard]] const Vector& lower() const { return lower_; }
    [[nodiscard]] const Vector& upper() const { return upper_; }
    [[nodiscard]] const Matrix& C() const { return C_; }
    [[nodiscard]] const Vector& d() const { return d_; }

    [[nodiscard]] const Matrix& equalityRows() const { return eqRows_; }
    [[nodiscard]] const Vector& equalityRhs() const { return eqRhs_; }
    [[nodiscard]] const Matrix& inequalityRows() const { return inRows_; }
    [[nodiscard]] const Vector& inequalityRhs() const { return inRhs_; }

    /// True when no constraint is present (WholeSpace, or an all-infinite box).
    [[nodiscard]] bool isUnconstrained() const { return eqRows_.rows() == 0 && inRows_.rows() == 0; }
    [[nodiscard]] bool isCompact() const;

    [[nodiscard]] bool contains(const Vector& z, double tol = 1e-9) const;
    [[nodiscard]] bool inRelativeInterior(const Vector& z, double tolRi = 1e-7) const;

    /// Recession cone as a set of the same family.
    [[nodiscard]] ConvexSet recessionCone() const;

    /// Adds the constraints z in S, where z = w.segment(offset, dim()).
    void addConstraintsTo(ConvexProgram& program, int offset) const;

    /// Largest value of the smallest inequality slack over the set, capped at
    /// `cap`, with the maximizer. Equalities are enforced exactly.
    [[nodiscard]] double maxMinSlack(Vector* argmax = nullptr, double cap = 1.0) const;

private:
    ConvexSet(Kind kind, int dim) : kind_(kind), dim_(dim) {}
    void finalizePolyhedron();

    Kind kind_;
    int dim_ = 0;
    Vector lower_, upper_;
    Matrix C_;
    Vector d_;
    Matrix eqRows_, inRows_;
    Vector eqRhs_, inRhs_;
};

std::ostream& operator<<(std::ostream& os, const ConvexSet& set);

}  // namespace bolza
