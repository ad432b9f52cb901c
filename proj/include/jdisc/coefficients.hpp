#pragma once

#include <vector>

#include "jdisc/grid.hpp"

namespace jdisc {

/// One monomial c * z^i * conj(z)^j * w^k * conj(w)^l.
struct MonomialTerm {
    cd c;
    int i = 0, j = 0, k = 0, l = 0;
};

/// The coefficient pair (a, b) of the quasilinear system
///   dbar z = a(z,w) conj(dz z),   dbar w = b(z,w) conj(dz z)
/// as finite monomial expansions. Every term must carry w or conj(w)
/// (k + l >= 1), which makes a(z,0) = b(z,0) = 0 structural.
class CoefficientPair {
public:
    /// Validates the structural zero, gamma > 0, a0 < 1, and that the declared
    /// bound a0 dominates the sampled sup of |a| over |z| <= 1, |w| <= 1+gamma.
    /// Pass a0 <= 0 to have the bound measured from the dense sample instead.
    CoefficientPair(std::vector<MonomialTerm> a_terms, std::vector<MonomialTerm> b_terms,
                    double gamma, double a0 = 0.0);

    const std::vector<MonomialTerm>& a_terms() const { return a_terms_; }
    const std::vector<MonomialTerm>& b_terms() const { return b_terms_; }
    double gamma() const { return gamma_; }
    double a0() const { return a0_; }

    cd eval_a(cd z, cd w) const { return eval(a_terms_, z, w); }
    cd eval_b(cd z, cd w) const { return eval(b_terms_, z, w); }

    bool zero() const { return a_terms_.empty() && b_terms_.empty(); }

    /// Max of |a| over a dense polar sample of the closed bidomain.
    double sampled_sup_a() const;

private:
    static cd eval(const std::vector<MonomialTerm>& terms, cd z, cd w);

    std::vector<MonomialTerm> a_terms_, b_terms_;
    double gamma_;
    double a0_;
};

} // namespace jdisc
