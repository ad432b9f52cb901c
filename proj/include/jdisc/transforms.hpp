#pragma once

#include <cstdint>
#include <optional>

#include "jdisc/calculus.hpp"
#include "jdisc/rng.hpp"

namespace jdisc {

/// Area-integral right inverse of dbar on the disc: (Tf)(zeta) with
/// dbar(Tf) = f on the interior and Tf continuous up to the boundary.
/// Computed mode by mode: the kernel is an angular convolution, so each
/// Fourier mode reduces to a pair of radial Volterra integrals with kernels
/// bounded by 1.
ComplexField cauchy_green(const ComplexField& f);

/// Principal-value transform R, realized structurally as dz(cauchy_green(f))
/// so that dz(Tf) = Rf holds by construction.
ComplexField ahlfors_beurling(const ComplexField& f);

/// Bergman-type projection with kernel (conj(tau) zeta - 1)^{-2}; with this
/// sign convention B(1) = -1 and B(zeta^k) = -zeta^k. Output is holomorphic:
/// only modes m >= 0 with radial profile proportional to r^m.
ComplexField bergman(const ComplexField& f);

/// Boundary-adapted transform T0 f = Tf - conj(Tf(1/conj(zeta))): still a
/// right inverse of dbar, with Re(T0 f) = 0 on |zeta| = 1.
ComplexField t0(const ComplexField& f);

/// R0 f = Rf + B(conj f); equals dz(t0(f)) up to discretization.
ComplexField r0(const ComplexField& f);

enum class OperatorId { T, R, B, T0, R0 };

const char* operator_name(OperatorId id);
ComplexField apply_operator(OperatorId id, const ComplexField& f);

/// Lower-bound witness of an L^p -> L^p operator norm from seeded random probes.
struct OperatorNormProfile {
    OperatorId operator_id;
    double p = 2.0;
    double estimate = 0.0; // best ratio ||Op f||_p / ||f||_p seen
    int trials = 0;
    std::optional<double> alpha; // (p-2)/p when p > 2
    int best_trial = -1;
};

/// Random band-limited polynomial probe: modes |m| <= max_mode, radial powers
/// r^{|m|+2t}, t <= max_radial. Coefficients are seeded complex Gaussians with
/// mild decay.
ComplexField random_band_limited(std::shared_ptr<const DiscGrid> grid, rng& gen,
                                 int max_mode = 16, int max_radial = 8);

OperatorNormProfile estimate_norm(OperatorId id, double p, int trials, std::uint64_t seed,
                                  std::shared_ptr<const DiscGrid> grid);

} // namespace jdisc
