#pragma once

namespace bolza {

/// Numerical tolerances shared by every module. Certificate-style checks
/// scale by (1 + |values involved|).
struct Tolerances {
    double psd = 1e-10;     // eigenvalue floor for PSD / kernel decisions
    double kkt = 1e-9;      // interior-point KKT residual stopping threshold
    double ri = 1e-7;       // slack required for relative-interior membership
    double cert = 1e-6;     // Fenchel-Young / duality certificates
    double feas = 1e-8;     // primal feasibility of returned points
    double num = 1e-9;      // generic floating-point slack
    double sub = 1e-6;      // subgradient certificates
    double grid = 1e-7;     // convexity of sampled grid functions
    double active = 1e-7;   // constraint counted active when slack below this
};

inline const Tolerances& defaultTolerances() {
    static const Tolerances tol{};
    return tol;
}

}  // namespace bolza
