#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "bolza/linalg.hpp"

namespace bolza {

/// Twice-differentiable convex function of a small vector. The defaults
/// differentiate numerically with central differences.
class SmoothFunction {
public:
    virtual ~SmoothFunction() = default;
    [[nodiscard]] virtual int dim() const = 0;
    [[nodiscard]] virtual double value(const Vector& z) const = 0;
    [[nodiscard]] virtual Vector gradient(const Vector& z) const;
    [[nodiscard]] virtual Matrix hessian(const Vector& z) const;
};

/// z -> 0.5 z'Pz + q'z + r
class QuadraticFunction final : public SmoothFunction {
public:
    QuadraticFunction(Matrix P, Vector q, double r);

    [[nodiscard]] int dim() const override { return static_cast<int>(q_.size()); }
    [[nodiscard]] double value(const Vector& z) const override;
    [[nodiscard]] Vector gradient(const Vector& z) const override;
    [[nodiscard]] Matrix hessian(const Vector& z) const override;

    [[nodiscard]] const Matrix& P() const { return P_; }
    [[nodiscard]] const Vector& q() const { return q_; }
    [[nodiscard]] double r() const { return r_; }

private:
    Matrix P_;
    Vector q_;
    double r_;
};

/// Black-box convex evaluator; derivatives by finite differences.
class CallableFunction final : public SmoothFunction {
public:
    CallableFunction(int dim, std::function<double(const Vector&)> fn);

    [[nodiscard]] int dim() const override { return dim_; }
    [[nodiscard]] double value(const Vector& z) const override { return fn_(z); }

private:
    int dim_;
    std::function<double(const Vector&)> fn_;
};

/// fn(map * w + offset), a smooth function applied to an affine image of the
/// program variables.
struct SmoothTerm {
    Matrix map;
    Vector offset;
    std::shared_ptr<const SmoothFunction> fn;

    [[nodiscard]] Vector argument(const Vector& w) const { return map * w + offset; }
    [[nodiscard]] double value(const Vector& w) const { return fn->value(argument(w)); }
};

/// minimize   0.5 w'Pw + c'w + c0 + sum_k objective_k(w)
/// subject to E w = e,  G w <= h,  constraint_j(w) <= 0.
struct ConvexProgram {
    Matrix P;
    Vector c;
    double c0 = 0.0;
    Matrix E;
    Vector e;
    Matrix G;
    Vector h;
    std::vector<SmoothTerm> objective;
    std::vector<SmoothTerm> constraints;

    ConvexProgram() = default;
    explicit ConvexProgram(int n);

    [[nodiscard]] int size() const { return static_cast<int>(c.size()); }
    [[nodiscard]] int numEqualities() const { return static_cast<int>(E.rows()); }
    [[nodiscard]] int numInequalities() const { return static_cast<int>(G.rows()); }
    [[nodiscard]] bool isQuadratic() const { return objective.empty() && constraints.empty(); }

    void addEqualities(const Matrix& rows, const Vector& rhs);
    void addInequalities(const Matrix& rows, const Vector& rhs);
    /// Append `extra` zero-cost variables at the end.
    void grow(int extra);

    [[nodiscard]] double objectiveValue(const Vector& w) const;
    /// Largest violation over all constraints (0 when feasible).
    [[nodiscard]] double maxViolation(const Vector& w) const;
};

enum class ProgramStatus { Optimal, Infeasible, Unbounded, IterLimit };

std::string_view toString(ProgramStatus status);

struct ProgramSolution {
    ProgramStatus status = ProgramStatus::IterLimit;
    Vector w;
    Vector eqDual;    // multipliers of E w = e
    Vector ineqDual;  // multipliers (>= 0) of G w <= h
    Vector nlDual;    // multipliers (>= 0) of the smooth constraints
    double objective = 0.0;
    double kktResidual = 0.0;
    int iterations = 0;
    /// Merit value after every accepted step; nonincreasing by construction.
    std::vector<double> residualHistory;
};

struct ProgramOptions {
    double tolerance = 1e-9;
    int maxIterations = 0;       // 0: 10 * (variables + constraints), at least 60
    bool diagnose = true;        // run the phase-one / recession programs on failure
    double feasibilityTolerance = 1e-8;
};

/// Primal-dual interior-point method (Mehrotra predictor-corrector with a
/// monotone merit safeguard). When it does not converge, infeasibility is
/// decided by a phase-one program and unboundedness by a recession-ray
/// program; only then is IterLimit reported.
ProgramSolution solveProgram(const ConvexProgram& program, const ProgramOptions& options = {});

/// Convenience LP: minimize c'w s.t. E w = e, G w <= h.
ProgramSolution solveLinearProgram(const Vector& c, const Matrix& E, const Vector& e, const Matrix& G,
                                   const Vector& h, const ProgramOptions& options = {});

}  // namespace bolza
