#include "jdisc/coefficients.hpp"

#include <cmath>

#include "jdisc/errors.hpp"

namespace jdisc {

namespace {
cd ipow(cd z, int n) {
    cd out(1.0, 0.0);
    for (int k = 0; k < n; ++k) out *= z;
    return out;
}
} // namespace

cd CoefficientPair::eval(const std::vector<MonomialTerm>& terms, cd z, cd w) {
    cd out(0.0, 0.0);
    cd zb = std::conj(z), wb = std::conj(w);
    for (const auto& t : terms)
        out += t.c * ipow(z, t.i) * ipow(zb, t.j) * ipow(w, t.k) * ipow(wb, t.l);
    return out;
}

double CoefficientPair::sampled_sup_a() const {
    // max modulus lives on the boundary tori; sample those densely plus a
    // few interior radii
    const int na = 48;
    double sup = 0.0;
    std::vector<double> rz = {0.25, 0.5, 0.75, 0.95, 1.0};
    std::vector<double> rw;
    for (double t : {0.25, 0.5, 0.75, 0.95, 1.0}) rw.push_back(t * (1.0 + gamma_));
    rw.push_back(0.0);
    for (double r1 : rz)
        for (double r2 : rw)
            for (int p = 0; p < na; ++p)
                for (int q = 0; q < na; ++q) {
                    double tp = 2.0 * 3.14159265358979323846 * p / na;
                    double tq = 2.0 * 3.14159265358979323846 * q / na;
                    cd z(r1 * std::cos(tp), r1 * std::sin(tp));
                    cd w(r2 * std::cos(tq), r2 * std::sin(tq));
                    sup = std::max(sup, std::abs(eval(a_terms_, z, w)));
                }
    return sup;
}

CoefficientPair::CoefficientPair(std::vector<MonomialTerm> a_terms,
                                 std::vector<MonomialTerm> b_terms, double gamma, double a0)
    : a_terms_(std::move(a_terms)), b_terms_(std::move(b_terms)), gamma_(gamma), a0_(a0) {
    if (!(gamma_ > 0.0)) throw config_error("coefficient overshoot margin gamma must be > 0");
    for (const auto& t : a_terms_)
        if (t.k + t.l < 1 || t.i < 0 || t.j < 0 || t.k < 0 || t.l < 0)
            throw config_error("every a-term needs k+l >= 1 and nonnegative exponents");
    for (const auto& t : b_terms_)
        if (t.k + t.l < 1 || t.i < 0 || t.j < 0 || t.k < 0 || t.l < 0)
            throw config_error("every b-term needs k+l >= 1 and nonnegative exponents");
    double sup = sampled_sup_a();
    if (a0_ <= 0.0) a0_ = sup + 1e-12;
    if (sup > a0_ + 1e-9)
        throw config_error("declared a0 is below the sampled sup of |a|");
    if (!(a0_ < 1.0)) throw config_error("ellipticity requires a0 < 1");
}

} // namespace jdisc
