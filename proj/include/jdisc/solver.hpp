#pragma once

#include <cstdint>
#include <vector>

#include "jdisc/coefficients.hpp"
#include "jdisc/field.hpp"

namespace jdisc {

struct SolverConfig {
    double p = 2.25;      // working exponent, > 2
    int n = 8;            // vanishing order of w at the origin
    int n_radial = 64;
    int n_angular = 256;
    DiscGrid::RadialRule rule = DiscGrid::RadialRule::gauss_radau;
    double tol_h = 1e-12;     // inner L^p stopping tolerance
    double tol_outer = 1e-11; // sup-norm stopping tolerance
    int max_inner = 200;
    int max_outer = 200;
    double damping = 0.5;  // relaxation factor in (0, 1]
    double safety = 1.05;  // multiplies the empirical operator norm estimate
    int norm_trials = 24;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Solution ansatz z = zeta e^u, w = zeta^n e^v with h = dbar u.
struct DiscSolution {
    ComplexField u, v, h;
    ComplexField z, w;
    int n = 1;
};

struct ResidualRecord {
    double pde_z = 0.0;      // max interior |dbar z - a(z,w) conj(dz z)|
    double pde_w = 0.0;      // max interior |dbar w - b(z,w) conj(dz z)|
    double boundary_z = 0.0; // max over |zeta| = 1 of | |z| - 1 |
    double boundary_w = 0.0;
};

struct SolveReport {
    bool converged = false;
    int outer_iters = 0;
    int inner_iters_total = 0;
    std::vector<double> history_u_sup, history_v_sup, history_h_p;
    ResidualRecord residuals;
    int winding_z = 0;
    double min_jacobian = 0.0;
    bool orientation_ok = false;
    double envelope_C = 0.0; // smallest C with |w| <= C |zeta|^n over the samples
    double sup_w = 0.0;
    double delta = 0.0; // n^{-1/p}
    double p = 0.0;
    int n = 0;
    double a0 = 0.0;
    double r0_norm_estimate = 0.0;
    double contraction_ratio = 0.0; // worst geometric-mean rate over inner solves
    double h_bound = 0.0;           // ||A||_p / (1 - a0 * safety * estimate)
    double h_norm = 0.0;            // measured ||h||_p at the last inner solve
};

/// Smallest candidate p with a0 * safety * estimate(||R0||_p) < 1.
/// Throws infeasibility_error (carrying the failing products) if none qualifies.
double select_exponent(const CoefficientPair& coeffs, const std::vector<double>& candidates,
                       std::shared_ptr<const DiscGrid> grid, int trials, std::uint64_t seed,
                       double safety = 1.05);

struct InnerSolve {
    ComplexField h;
    int iters = 0;
    std::vector<double> deltas; // successive L^p distances
    double rate = 0.0;          // geometric-mean contraction rate
    double a_norm_p = 0.0;      // ||A||_p of the multiplier field
};

/// Fixed point of h -> A (1 + conj(zeta) conj(R0 h)) in L^p, where
/// A = a(zeta e^u, zeta^n e^v) zeta^{-1} e^{conj(u) - u}. The singular
/// zeta^{-1} factor is cancelled against the monomial structure of a.
InnerSolve solve_h(const ComplexField& u, const ComplexField& v, const CoefficientPair& coeffs,
                   int n, double p, double tol_h, int max_inner);

/// Damped Picard iteration of (u, v) -> (T0 h, T0(B (1 + conj(zeta) conj(R0 h)))).
/// Surfaces non-convergence as convergence_error with the recorded history.
std::pair<DiscSolution, SolveReport> outer_iterate(const CoefficientPair& coeffs,
                                                   const SolverConfig& config);

ResidualRecord residual(const DiscSolution& sol, const CoefficientPair& coeffs);

/// Total argument increment / 2 pi of a closed nonvanishing trace.
int winding_number(const BoundaryTrace& tr);

struct JacobianCheck {
    double min_jacobian = 0.0;
    bool orientation_ok = false;
};

/// Minimum over nodes of |dz z|^2 - |dbar z|^2.
JacobianCheck jacobian_check(const DiscSolution& sol);

/// Smallest C with |w(zeta)| <= C |zeta|^n over the grid, evaluated stably
/// as max exp(Re v).
double envelope_constant(const DiscSolution& sol);

/// Max over boundary nodes of max(| |z|-1 |, | |w|-1 |).
double torus_distance(const DiscSolution& sol);

} // namespace jdisc
