#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bolza/convex_set.hpp"
#include "bolza/problem.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

enum class Condition { CQ, H, Hprime, Amix, Bmix };
enum class Verdict { Holds, Fails, Undecided };

std::string_view toString(Condition c);
std::string_view toString(Verdict v);

struct QualificationReport {
    Condition condition = Condition::CQ;
    Verdict verdict = Verdict::Undecided;
    /// Short code naming the sub-case that decided the verdict.
    std::string reasonCode;
    /// One code per stage where the decision is made stage by stage.
    std::vector<std::string> stageReasons;
    /// Strictly feasible states for (H), costates for (H'), a ray for (CQ).
    std::vector<Vector> witness;
    /// Controls of the (H) witness.
    std::vector<Vector> witnessControls;
    /// Offending point for a failed sampled certificate: (t, x, u[, z]).
    std::optional<std::vector<Vector>> counterexample;
};

/// ker B cap ker R cap U_inf = {0}.
QualificationReport checkCQ(const StageSpec& stage, const Tolerances& tol = defaultTolerances());

struct EqSysResult {
    bool feasible = false;
    /// Largest smallest-slack over all inequality rows, capped at 1.
    double slack = 0.0;
    std::vector<Vector> states;     // x_0..x_T
    std::vector<Vector> controls;   // u_0..u_{T-1}
};

/// A trajectory of x_{t+1} = (I + A_t) x_t + B_t u_t + phi_t through the
/// relative interiors of X_t, U_t and dom g, found by maximizing the smallest
/// inequality slack. Mixed stages add the margin f_t(x_t, u_t) <= -slack.
EqSysResult solveEqSys(const BolzaProblem& problem, const Tolerances& tol = defaultTolerances());

/// (H): eq-sys witness with slack > tol.ri, then x_T in ri dom g and
/// dx_t in ri Gamma_L(t, x_t) checked directly.
QualificationReport checkH(const BolzaProblem& problem, const Tolerances& tol = defaultTolerances());

/// (H') through stagewise sub-cases:
///   "i"   Q_t > 0 or X_t compact,
///   "ii"  (R_t > 0 or U_t compact) and rank(A_t' + I) = n,
///   "iii" stage fully unconstrained.
/// Any mix of "i" and "ii" holds; all "iii" holds with witness p = 0;
/// anything else is Undecided.
QualificationReport checkHprime(const BolzaProblem& problem, const Tolerances& tol = defaultTolerances());

/// User-supplied bounds for the mixed-class conditions, falsified by sampling.
struct CertificateInput {
    /// psi_t(x) bounding |u| on Omega_t, for (A). One per stage, or a single
    /// function used for every stage.
    std::vector<std::function<double(const Vector& x)>> psi;
    /// h_t(z) bounding |x| on {l_t(x,u) - z.u <= kappa0}, for (B).
    std::vector<std::function<double(const Vector& z)>> h;
    double kappa0 = 0.0;
    /// Points are drawn from [-radius, radius] intersected with the bounds of
    /// X_t and U_t.
    double sampleRadius = 10.0;
    int budget = 10000;
    std::uint64_t seed = 20240601;
};

/// Reports for (A) and (B), in that order; a condition without a certificate
/// is reported Undecided.
std::vector<QualificationReport> checkMixedCertificates(const BolzaProblem& problem, const CertificateInput& certs,
                                                        const Tolerances& tol = defaultTolerances());

bool relativeInteriorMembership(const ConvexSet& set, const Vector& z, const Tolerances& tol = defaultTolerances());

}  // namespace bolza
