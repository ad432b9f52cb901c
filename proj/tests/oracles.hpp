#pragma once

// Test-only reference computations, kept independent of the per-mode
// implementation in src/: direct two-dimensional quadrature of the defining
// kernels, principal value included, plus a tiny monomial-polynomial helper
// for probes whose derivatives are known in closed form.

#include <complex>
#include <functional>
#include <vector>

#include "jdisc/field.hpp"

namespace jdisc::oracle {

using cd = std::complex<double>;
using Fn = std::function<cd(cd)>;

/// -(1/pi) int_D f(tau)/(tau - zeta) dA(tau), |zeta| < 1.
cd cauchy_green_value(const Fn& f, cd zeta);

/// Principal value of -(1/pi) int_D f(tau)/(tau - zeta)^2 dA(tau), |zeta| < 0.9.
cd beurling_pv_value(const Fn& f, cd zeta);

/// -(1/pi) int_D f(tau)/(conj(tau) zeta - 1)^2 dA(tau), |zeta| < 1.
cd bergman_value(const Fn& f, cd zeta);

/// Sparse polynomial in (z, conj z).
struct Poly2 {
    struct Term {
        cd c;
        int a, b;
    };
    std::vector<Term> terms;

    cd operator()(cd z) const;
    Poly2 d_z() const;    // termwise d/dz
    Poly2 d_zbar() const; // termwise d/d(conj z)
    ComplexField sample(std::shared_ptr<const DiscGrid> g) const;
};

} // namespace jdisc::oracle
