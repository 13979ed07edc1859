#pragma once

#include <vector>

#include "bolza/model.hpp"
#include "bolza/problem.hpp"
#include "bolza/solver.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

/// H_t(x, p) = sup_v { p.v - L_t(x, v) }, which may be -inf (x outside the
/// state set) or +inf.
struct HamiltonianValue {
    enum class Kind { Finite, PlusInfinity, MinusInfinity };
    Kind kind = Kind::Finite;
    double value = 0.0;

    [[nodiscard]] bool isFinite() const { return kind == Kind::Finite; }
};

HamiltonianValue hamiltonianEval(const PrimalModel& model, int t, const Vector& x, const Vector& p,
                                 const Tolerances& tol = defaultTolerances());

/// Euler-Lagrange Fenchel-Young gap of stage t (acting on x_t -> x_{t+1}):
///   L_t(x_t, dx) + K_t(p_{t+1}, dp) - (x_t.dp + dx.p_{t+1}),
/// with dx = x_{t+1} - x_t and dp = p_{t+1} - p_t. Zero exactly when
/// (-dp, dx) lies in the saddle subdifferential of H_t at (x_t, p_{t+1}).
/// +inf when one of L, K is infinite; InfeasiblePoint when both are.
double inclusionResidual(const BolzaModel& model, int t, const Vector& x, const Vector& pNext, const Vector& dp,
                         const Vector& dx, const Tolerances& tol = defaultTolerances());

/// The same gap split through the Hamiltonian:
///   pPart = H(x, p') + L(x, dx) - p'.dx     (dx in the p-subdifferential)
///   xPart = K(p', dp) - H(x, p') - x.dp     (-dp in the x-subdifferential)
struct HamiltonianGaps {
    double pPart = 0.0;
    double xPart = 0.0;
    [[nodiscard]] double total() const { return pPart + xPart; }
};

HamiltonianGaps hamiltonianGaps(const PrimalModel& model, int t, const Vector& x, const Vector& pNext,
                                const Vector& dp, const Vector& dx, const Tolerances& tol = defaultTolerances());

/// g(x_T) + g*(-p_T) + x_T.p_T; zero exactly when -p_T is a subgradient of g
/// at x_T. InfeasiblePoint when x_T is outside dom g.
double transversalityResidual(const BolzaModel& model, const Vector& xT, const Vector& pT,
                              const Tolerances& tol = defaultTolerances());

enum class PairStatus { Characteristic, NotASubgradient, SolverFailure };

std::string_view toString(PairStatus status);

/// Paired primal states and dual costates from stage tau, with residuals.
/// hamResiduals are computed through H, elResiduals directly from L and K.
struct TrajectoryPair {
    int tau = 0;
    std::vector<Vector> states;     // x_tau..x_T
    std::vector<Vector> costates;   // p_tau..p_T
    std::vector<double> hamResiduals;
    std::vector<double> elResiduals;
    double transversalityResidual = 0.0;
    /// theta + omega - xi.eta from the two solves.
    double gap = 0.0;
    PairStatus status = PairStatus::SolverFailure;
};

/// Solves the primal from (tau, xi) and the dual from (tau, eta) and pairs
/// them: (x_tau, p_tau) = (xi, -eta).
TrajectoryPair buildCharacteristic(const PrimalModel& model, int tau, const Vector& xi, const Vector& eta,
                                   const Tolerances& tol = defaultTolerances());

/// Residuals of given trajectories, without any solve.
TrajectoryPair assemblePair(const PrimalModel& model, int tau, const std::vector<Vector>& states,
                            const std::vector<Vector>& costates, const Tolerances& tol = defaultTolerances());

struct CharacteristicVerdict {
    bool pass = false;
    /// Sum of all residuals; bounds theta + omega - xi.eta from above.
    double epsilon = 0.0;
    /// First stage whose residual exceeds tolerance, -1 if none; horizon()
    /// when only transversality fails.
    int failingStep = -1;
    double maxResidual = 0.0;
};

/// Checks every per-step inclusion and transversality of `pair`, which must
/// start at p_tau = -eta.
CharacteristicVerdict verifyCharacteristic(const PrimalModel& model, const TrajectoryPair& pair, const Vector& eta,
                                           const Tolerances& tol = defaultTolerances());

/// Forward Hamiltonian recursion for unconstrained problems with R_t > 0
/// and I + A_t invertible:
///   p_{t+1} = (I + A_t')^{-1} (p_t + Q_t x_t),
///   x_{t+1} = x_t + A_t x_t + phi_t + B_t R_t^{-1} B_t' p_{t+1}.
/// Throws UnsupportedClass outside that class.
TrajectoryPair propagateSmooth(const PrimalModel& model, int tau, const Vector& xi, const Vector& eta,
                               const Tolerances& tol = defaultTolerances());

}  // namespace bolza
