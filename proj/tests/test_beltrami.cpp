#include <doctest.h>

#include <cmath>

#include "jdisc/calculus.hpp"
#include "jdisc/errors.hpp"
#include "jdisc/solver.hpp"
#include "jdisc/transforms.hpp"

using namespace jdisc;

namespace {

CoefficientPair zero_coeffs() { return CoefficientPair({}, {}, 0.5); }

CoefficientPair linear_w(double ca, double cb, double gamma = 0.5) {
    std::vector<MonomialTerm> a, b;
    if (ca != 0.0) a.push_back({cd(ca, 0.0), 0, 0, 1, 0});
    if (cb != 0.0) b.push_back({cd(cb, 0.0), 0, 0, 1, 0});
    return CoefficientPair(std::move(a), std::move(b), gamma);
}

double max_abs(const ComplexField& f) {
    double m = 0.0;
    for (const cd& z : f.values()) m = std::max(m, std::abs(z));
    return m;
}

} // namespace

TEST_CASE("coefficient pair validation") {
    CHECK_THROWS_AS(CoefficientPair({{cd(0.1, 0.0), 1, 0, 0, 0}}, {}, 0.5), config_error);
    CHECK_THROWS_AS(CoefficientPair({}, {}, 0.0), config_error);
    // |a| = 0.9 |w| reaches 1.35 > 1 on |w| <= 1.5: not elliptic
    CHECK_THROWS_AS(linear_w(0.9, 0.0), config_error);
    // declared a0 below the sampled sup
    CHECK_THROWS_AS(CoefficientPair({{cd(0.1, 0.0), 0, 0, 1, 0}}, {}, 0.5, 0.05), config_error);

    CoefficientPair c = linear_w(0.1, 0.1);
    CHECK(c.a0() == doctest::Approx(0.15).epsilon(1e-6));
    CHECK(std::abs(c.eval_a(cd(0.3, 0.1), cd(0.2, -0.4)) - cd(0.02, -0.04)) < 1e-15);
    CHECK(c.eval_a(cd(0.5, 0.0), cd(0.0, 0.0)) == cd(0.0, 0.0));
}

TEST_CASE("select_exponent") {
    auto g = build_grid(24, 48);
    CoefficientPair mild = linear_w(0.2, 0.0); // a0 = 0.3
    double p = select_exponent(mild, {3.0, 2.25, 2.5}, g, 16, 7);
    CHECK(p == 2.25); // smallest candidate qualifies at a0 = 0.3

    CoefficientPair zero = zero_coeffs(); // a0 ~ 1e-12, condition vacuous
    CHECK(select_exponent(zero, {2.25, 2.5}, g, 8, 7) == 2.25);

    std::vector<MonomialTerm> hot = {{cd(0.666, 0.0), 0, 0, 1, 0}};
    CoefficientPair tight(std::move(hot), {}, 0.5); // a0 = 0.999
    CHECK_THROWS_AS(select_exponent(tight, {2.25}, g, 16, 7), infeasibility_error);
    try {
        select_exponent(tight, {2.25}, g, 16, 7);
    } catch (const infeasibility_error& e) {
        REQUIRE(e.failing_products.size() == 1);
        CHECK(e.failing_products[0].first == 2.25);
        CHECK(e.failing_products[0].second >= 0.999);
    }

    CHECK_THROWS_AS(select_exponent(mild, {}, g, 8, 7), config_error);
    CHECK_THROWS_AS(select_exponent(mild, {2.0}, g, 8, 7), config_error);
}

TEST_CASE("solve_h trivial and bounded") {
    auto g = build_grid(48, 128);
    ComplexField u(g), v(g);

    InnerSolve triv = solve_h(u, v, zero_coeffs(), 3, 2.25, 1e-12, 50);
    CHECK(triv.iters == 1);
    CHECK(max_abs(triv.h) == 0.0);

    // a = 0.1 w, b = 0, n = 8, u = v = 0: check the L^p bound
    CoefficientPair c = linear_w(0.1, 0.0);
    double p = 2.25;
    InnerSolve s = solve_h(u, v, c, 8, p, 1e-13, 100);
    double est = estimate_norm(OperatorId::R0, p, 24, 11, g).estimate;
    double bound = s.a_norm_p / (1.0 - c.a0() * 1.05 * est);
    CHECK(norm(s.h, p) <= bound + 1e-10);

    // contraction-rate observation: measured rate below a0 ||R0||_p + margin
    CHECK(s.rate <= c.a0() * est + 0.05);
}

TEST_CASE("outer iteration: zero coefficients give the exact monomial pair") {
    SolverConfig cfg;
    cfg.n = 3;
    cfg.n_radial = 32;
    cfg.n_angular = 64;
    auto [sol, rep] = outer_iterate(zero_coeffs(), cfg);
    CHECK(rep.converged);
    CHECK(rep.outer_iters == 1);
    auto g = sol.z.grid_ptr();
    ComplexField zeta = ComplexField::coordinate(g);
    ComplexField zeta3 = zeta * zeta * zeta;
    CHECK(max_abs(sol.z - zeta) < 1e-12);
    CHECK(max_abs(sol.w - zeta3) < 1e-12);
    CHECK(rep.residuals.pde_z < 1e-10);
    CHECK(rep.residuals.pde_w < 1e-10);
    CHECK(rep.residuals.boundary_z < 1e-12);
    CHECK(rep.winding_z == 1);
    CHECK(rep.min_jacobian > 0.0);
    CHECK(rep.envelope_C == doctest::Approx(1.0));
    CHECK(torus_distance(sol) < 1e-12);
    CHECK(rep.history_u_sup.size() == size_t(rep.outer_iters));
}

TEST_CASE("outer iteration: nontrivial coefficients converge and certify") {
    SolverConfig cfg;
    cfg.n = 8;
    cfg.n_radial = 48;
    cfg.n_angular = 128;
    cfg.tol_outer = 1e-11;
    CoefficientPair c = linear_w(0.1, 0.1);
    auto [sol, rep] = outer_iterate(c, cfg);
    CHECK(rep.converged);
    CHECK(rep.residuals.boundary_z <= 1e-6);
    CHECK(rep.residuals.boundary_w <= 1e-6);
    // boundary attachment within a small multiple of the stopping tolerance
    CHECK(std::max(rep.residuals.boundary_z, rep.residuals.boundary_w) <=
          10.0 * cfg.tol_outer);
    CHECK(rep.residuals.pde_z <= 1e-5);
    CHECK(rep.residuals.pde_w <= 1e-5);
    CHECK(rep.winding_z == 1);
    CHECK(rep.min_jacobian > 0.0);
    CHECK(rep.sup_w < 1.5);
    CHECK(rep.contraction_ratio <= c.a0() * rep.r0_norm_estimate + 0.05);
    CHECK(rep.h_norm <= rep.h_bound + 1e-10);
    CHECK(torus_distance(sol) == doctest::Approx(std::max(rep.residuals.boundary_z,
                                                          rep.residuals.boundary_w)));

    // Re u = Re v = 0 on the boundary, inherited from T0
    const DiscGrid& g = sol.u.grid();
    int last = g.n_radial() - 1;
    for (int j = 0; j < g.n_angular(); ++j) {
        CHECK(std::abs(sol.u(last, j).real()) <= 1e-8);
        CHECK(std::abs(sol.v(last, j).real()) <= 1e-8);
    }

    // w vanishes to order n: low angular moments at the innermost rings vanish
    // (mode n-k of zeta^n e^v decays like r^{n+k}, so only small radii qualify)
    ModeStack wm = to_modes(sol.w);
    for (int m = 0; m < cfg.n; ++m) {
        int slot = g.slot_of_mode(m);
        CHECK(std::abs(wm.modes[slot][0]) < 1e-12);
        CHECK(std::abs(wm.modes[slot][1]) < 1e-11);
    }
}

TEST_CASE("stronger coefficients still give an orientation-preserving disc") {
    // |a| reaches 0.3 on the coefficient domain; the Jacobian stays positive
    // because |dbar z / dz z| = |a| <= a0 < 1
    CoefficientPair c = linear_w(0.2, 0.2);
    CHECK(c.a0() == doctest::Approx(0.3).epsilon(1e-6));
    SolverConfig cfg;
    cfg.n = 8;
    cfg.n_radial = 48;
    cfg.n_angular = 128;
    auto [sol, rep] = outer_iterate(c, cfg);
    CHECK(rep.converged);
    CHECK(rep.min_jacobian > 0.0);
    CHECK(rep.winding_z == 1);
    CHECK(rep.residuals.boundary_z <= 1e-6);
}

TEST_CASE("sup norm of u decreases as n grows") {
    CoefficientPair c = linear_w(0.1, 0.1);
    double prev = 1e9;
    for (int n : {8, 16, 32}) {
        SolverConfig cfg;
        cfg.n = n;
        cfg.n_radial = 48;
        cfg.n_angular = 128;
        auto [sol, rep] = outer_iterate(c, cfg);
        CHECK(rep.converged);
        double usup = rep.history_u_sup.back();
        CHECK(usup < prev);
        prev = usup;
    }
}

TEST_CASE("residual flags a corrupted solution") {
    SolverConfig cfg;
    cfg.n = 3;
    cfg.n_radial = 32;
    cfg.n_angular = 64;
    auto [sol, rep] = outer_iterate(zero_coeffs(), cfg);
    // scale the boundary ring of w by 1.1
    const DiscGrid& g = sol.w.grid();
    int last = g.n_radial() - 1;
    for (int j = 0; j < g.n_angular(); ++j) sol.w(last, j) *= cd(1.1, 0.0);
    ResidualRecord rec = residual(sol, zero_coeffs());
    CHECK(rec.boundary_w >= 0.05);
    CHECK(torus_distance(sol) >= 0.05);
}

TEST_CASE("winding numbers") {
    auto g = build_grid(16, 64);
    ComplexField zeta = ComplexField::coordinate(g);
    CHECK(winding_number(boundary_trace(zeta)) == 1);
    CHECK(winding_number(boundary_trace(zeta * zeta)) == 2);
    ComplexField shifted = zeta + ComplexField(g, cd(2.0, 0.0));
    CHECK(winding_number(boundary_trace(shifted)) == 0);
    ComplexField zero(g);
    CHECK_THROWS_AS(winding_number(boundary_trace(zero)), degeneracy_error);
}

TEST_CASE("jacobian detector") {
    auto g = build_grid(24, 48);
    DiscSolution sol;
    sol.n = 1;
    sol.z = ComplexField::coordinate(g);
    JacobianCheck ok = jacobian_check(sol);
    CHECK(ok.min_jacobian == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ok.orientation_ok);

    sol.z = conj(ComplexField::coordinate(g));
    JacobianCheck bad = jacobian_check(sol);
    CHECK(bad.min_jacobian == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(!bad.orientation_ok);
}

TEST_CASE("infeasible configuration is rejected before iterating") {
    std::vector<MonomialTerm> hot = {{cd(0.666, 0.0), 0, 0, 1, 0}};
    CoefficientPair tight(std::move(hot), {}, 0.5);
    SolverConfig cfg;
    cfg.n_radial = 24;
    cfg.n_angular = 48;
    CHECK_THROWS_AS(outer_iterate(tight, cfg), infeasibility_error);
}
