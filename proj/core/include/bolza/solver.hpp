#pragma once

#include <vector>

#include "bolza/ext_real.hpp"
#include "bolza/model.hpp"
#include "bolza/problem.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterLimit };

std::string_view toString(SolveStatus status);

/// Optimal trajectory of a Bolza problem started at stage tau.
///
/// states holds x_tau..x_T, costates p_tau..p_T. Costates are the
/// multipliers of x_tau = xi and of x_{t+1} - x_t = v_t, signed so that
/// (p_{t+1} - p_t, p_{t+1}) is a subgradient of L_t at (x_t, x_{t+1} - x_t)
/// and -p_T one of g at x_T. For a dual solve, states are the dual states p
/// and costates the primal states x.
struct SolveResult {
    SolveStatus status = SolveStatus::IterLimit;
    /// Optimal value; +inf when infeasible; meaningless unless Optimal or Infeasible.
    ExtReal value = ExtReal::infinity();
    int tau = 0;
    std::vector<Vector> states;
    std::vector<Vector> controls;   // u_tau..u_{T-1}; empty for dual solves
    std::vector<Vector> costates;
    double kktResidual = 0.0;
    int iterations = 0;
    /// Merit history of the inner interior-point run.
    std::vector<double> residualHistory;

    [[nodiscard]] bool optimal() const { return status == SolveStatus::Optimal; }
};

struct DualityCertificate {
    ExtReal theta = ExtReal::infinity();
    ExtReal omega = ExtReal::infinity();
    Vector xi;
    Vector eta;
    /// theta + omega - xi.eta; +inf when either value is infinite.
    double gap = 0.0;
    bool gapInfinite = false;
    /// Same quantity recomputed from the residual sum of the paired trajectories.
    double fyResidual = 0.0;
    std::vector<double> elResiduals;
    double transversalityResidual = 0.0;
    SolveStatus primalStatus = SolveStatus::IterLimit;
    SolveStatus dualStatus = SolveStatus::IterLimit;
};

/// theta_tau(xi): the stacked program over x_tau..x_T of sum_t L_t + g.
SolveResult solveModel(const BolzaModel& model, int tau, const Vector& xi,
                       const Tolerances& tol = defaultTolerances());

SolveResult solvePrimal(const BolzaProblem& problem, int tau, const Vector& xi,
                        const Tolerances& tol = defaultTolerances());
SolveResult solvePrimal(const PrimalModel& model, int tau, const Vector& xi,
                        const Tolerances& tol = defaultTolerances());

/// omega_tau(eta), solved as the primal of the dual model from p_tau = -eta.
/// The mixed class has no program form of K_t; there omega is computed as
/// sup_xi { xi.eta - theta_tau(xi) } from one joint program.
SolveResult solveDual(const BolzaProblem& problem, int tau, const Vector& eta,
                      const Tolerances& tol = defaultTolerances());
SolveResult solveDual(const PrimalModel& model, int tau, const Vector& eta,
                      const Tolerances& tol = defaultTolerances());

struct SubgradientResult {
    Vector eta;
    SolveResult primal;
    SolveResult dual;
    /// theta(xi) + omega(eta) - xi.eta
    double fyResidual = 0.0;
    bool certified = false;
};

/// eta = -p_tau from the primal costates, certified by a dual solve.
SubgradientResult valueSubgradient(const PrimalModel& model, int tau, const Vector& xi,
                                   const Tolerances& tol = defaultTolerances());

DualityCertificate dualityCertificate(const PrimalModel& model, int tau, const Vector& xi, const Vector& eta,
                                      const Tolerances& tol = defaultTolerances());

/// Builds the certificate from already solved primal and dual problems.
DualityCertificate dualityCertificate(const PrimalModel& model, const SolveResult& primal, const SolveResult& dual,
                                      const Vector& xi, const Vector& eta,
                                      const Tolerances& tol = defaultTolerances());

}  // namespace bolza
