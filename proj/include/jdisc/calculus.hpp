#pragma once

#include <limits>

#include "jdisc/field.hpp"

namespace jdisc {

/// Wirtinger derivative d/d(zeta bar) = (1/2)(d_x + i d_y), spectral in the
/// angle, collocation in the radius. Shifts Fourier mode m to m+1.
ComplexField dbar(const ComplexField& f);

/// Wirtinger derivative d/d(zeta) = (1/2)(d_x - i d_y). Shifts mode m to m-1.
ComplexField dz(const ComplexField& f);

constexpr double kSupNorm = std::numeric_limits<double>::infinity();

/// Quadrature approximation of (int_D |f|^p dA)^{1/p}; exact max of |f| over
/// the samples when p = kSupNorm. Requires p >= 1.
double norm(const ComplexField& f, double p);

/// Quadrature value of int_D f conj(g) dA (positive-definite convention).
cd inner(const ComplexField& f, const ComplexField& g);

/// Mode-major view used by the integral transforms: modes[k] holds the radial
/// profile (length n_radial) of the Fourier mode in storage slot k.
struct ModeStack {
    std::shared_ptr<const DiscGrid> grid;
    std::vector<std::vector<cd>> modes;
};

ModeStack to_modes(const ComplexField& f);
ComplexField from_modes(const ModeStack& m);

} // namespace jdisc
