#pragma once

#include <utility>
#include <vector>

#include "bolza/convex_program.hpp"
#include "bolza/ext_real.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

/// A convex function given as a parametric program:
///   phi(z) = min_y  F(z, y)  subject to the constraints of `program`,
/// where the program variables are ordered (z, y). Stage Lagrangians,
/// conjugates and terminal costs are all represented this way, which lets
/// the stacked solver and the dualization share one code path.
class ProgramFragment {
public:
    ProgramFragment() = default;
    ProgramFragment(int argDim, ConvexProgram program);

    [[nodiscard]] int argDim() const { return argDim_; }
    [[nodiscard]] int auxDim() const { return program_.size() - argDim_; }
    [[nodiscard]] const ConvexProgram& program() const { return program_; }

    /// Fragment of z -> phi(M z + offset).
    [[nodiscard]] ProgramFragment reparametrized(const Matrix& M, const Vector& offset) const;

    /// Sum of parts phi_i(M_i z) plus linear.z, each part keeping its own
    /// auxiliary variables.
    static ProgramFragment combine(int argDim, const std::vector<std::pair<const ProgramFragment*, Matrix>>& parts,
                                   const Vector& linear);

    struct Evaluation {
        ProgramStatus status = ProgramStatus::IterLimit;
        ExtReal value = ExtReal::infinity();
        Vector aux;
        /// Subgradient of phi at z read off the program multipliers.
        Vector subgradient;
    };

    /// Optimal/Infeasible give a value (+inf when infeasible); Unbounded
    /// means phi(z) = -inf and is left to the caller to report.
    [[nodiscard]] Evaluation evaluate(const Vector& z, const Tolerances& tol = defaultTolerances()) const;

    /// Smallest-norm subgradient among all multipliers consistent with the
    /// minimizer `aux` of the inner program. Falls back to `fallback` when the
    /// multiplier program fails.
    [[nodiscard]] Vector minNormSubgradient(const Vector& z, const Vector& aux, const Vector& fallback,
                                            const Tolerances& tol = defaultTolerances()) const;

private:
    ConvexProgram fixed(const Vector& z) const;

    int argDim_ = 0;
    ConvexProgram program_;
};

/// Copies `part` into `big`, where the part variables equal T * (big variables) + t0.
void embedProgram(ConvexProgram& big, const ConvexProgram& part, const Matrix& T, const Vector& t0);
void embedProgram(ConvexProgram& big, const ConvexProgram& part, const Matrix& T);

}  // namespace bolza
