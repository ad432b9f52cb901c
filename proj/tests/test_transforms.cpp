#include <doctest.h>

#include <cmath>
#include <thread>

#include "jdisc/errors.hpp"
#include "jdisc/transforms.hpp"
#include "oracles.hpp"

using namespace jdisc;
using oracle::Poly2;

namespace {

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
    double m = 0.0;
    for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double max_abs(const ComplexField& a) {
    double m = 0.0;
    for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k]));
    return m;
}

// interior probe nodes spread over radius and angle
std::vector<std::pair<int, int>> probe_nodes(const DiscGrid& g) {
    std::vector<std::pair<int, int>> out;
    for (int i = 4; i < g.n_radial() - 4; i += g.n_radial() / 8)
        for (int j = 0; j < g.n_angular(); j += g.n_angular() / 3) {
            if (g.radius(i) < 0.15 || g.radius(i) > 0.85) continue;
            out.emplace_back(i, j);
        }
    return out;
}

} // namespace

TEST_CASE("cauchy-green on constants") {
    auto g = build_grid(48, 96);
    auto zero = ComplexField(g, cd(0.0, 0.0));
    CHECK(max_abs(cauchy_green(zero)) == 0.0);

    auto one = ComplexField(g, cd(1.0, 0.0));
    auto zbar = conj(ComplexField::coordinate(g));
    CHECK(max_abs_diff(cauchy_green(one), zbar) < 1e-11);

    // independent quadrature oracle at interior probes
    ComplexField Tf = cauchy_green(one);
    for (auto [i, j] : probe_nodes(*g)) {
        cd want = oracle::cauchy_green_value([](cd) { return cd(1.0, 0.0); }, g->node(i, j));
        CHECK(std::abs(Tf(i, j) - want) < 1e-9);
    }
}

TEST_CASE("cauchy-green inverts dbar") {
    auto g = build_grid(64, 128);
    auto zeta = ComplexField::coordinate(g);
    ComplexField f = zeta * conj(zeta);
    CHECK(max_abs_diff(dbar(cauchy_green(f)), f) < 1e-8);

    rng gen(11);
    for (int rep = 0; rep < 3; ++rep) {
        ComplexField probe = random_band_limited(g, gen, 12, 6);
        ComplexField err = dbar(cauchy_green(probe)) - probe;
        // interior nodes only: spectral differentiation of the band edge
        // leaves the outermost ring slightly less accurate
        double m = 0.0;
        for (int i = 0; i < g->n_radial(); ++i)
            for (int j = 0; j < g->n_angular(); ++j) m = std::max(m, std::abs(err(i, j)));
        CHECK(m < 1e-6);
    }
}

TEST_CASE("ahlfors-beurling basic values and PV oracle") {
    auto g = build_grid(48, 96);
    auto zero = ComplexField(g, cd(0.0, 0.0));
    CHECK(max_abs(ahlfors_beurling(zero)) == 0.0);

    auto one = ComplexField(g, cd(1.0, 0.0));
    CHECK(max_abs(ahlfors_beurling(one)) < 1e-10);

    // R(zbar): structural route dz(T zbar) against principal-value quadrature
    Poly2 p{{{cd(1.0, 0.0), 0, 1}}}; // f = conj(z)
    ComplexField Rf = ahlfors_beurling(p.sample(g));
    auto probes = probe_nodes(*g);
    REQUIRE(probes.size() >= 10);
    for (auto [i, j] : probes) {
        cd want = oracle::beurling_pv_value([&p](cd z) { return p(z); }, g->node(i, j));
        CHECK(std::abs(Rf(i, j) - want) < 1e-8);
    }

    // a mixed polynomial probe
    Poly2 q{{{cd(0.7, 0.3), 2, 1}, {cd(-0.2, 0.5), 0, 2}, {cd(0.1, 0.0), 1, 0}}};
    ComplexField Rq = ahlfors_beurling(q.sample(g));
    for (auto [i, j] : probes) {
        cd want = oracle::beurling_pv_value([&q](cd z) { return q(z); }, g->node(i, j));
        CHECK(std::abs(Rq(i, j) - want) < 1e-8);
    }
}

TEST_CASE("bergman projection values") {
    auto g = build_grid(48, 96);
    auto one = ComplexField(g, cd(1.0, 0.0));
    ComplexField B1 = bergman(one);
    CHECK(max_abs_diff(B1, cd(-1.0, 0.0) * one) < 1e-11);
    for (auto [i, j] : probe_nodes(*g)) {
        cd want = oracle::bergman_value([](cd) { return cd(1.0, 0.0); }, g->node(i, j));
        CHECK(std::abs(B1(i, j) - want) < 1e-9);
    }

    auto zbar = conj(ComplexField::coordinate(g));
    CHECK(max_abs(bergman(zbar)) < 1e-11);

    auto zeta = ComplexField::coordinate(g);
    ComplexField zk = one;
    for (int k = 1; k <= 4; ++k) {
        zk = zk * zeta;
        CHECK(max_abs_diff(bergman(zk), cd(-1.0, 0.0) * zk) < 1e-8);
    }
}

TEST_CASE("bergman output is angularly analytic") {
    auto g = build_grid(48, 96);
    rng gen(23);
    ComplexField Bf = bergman(random_band_limited(g, gen, 12, 6));
    ModeStack m = to_modes(Bf);
    double total = 0.0, anti = 0.0;
    for (int k = 0; k < g->n_angular(); ++k) {
        double e = 0.0;
        for (const cd& z : m.modes[k]) e += std::norm(z);
        total += e;
        if (g->mode_of_slot(k) < 0) anti += e;
    }
    CHECK(anti <= 1e-8 * total);
}

TEST_CASE("t0 solves the Re = 0 boundary problem") {
    auto g = build_grid(48, 96);
    auto zero = ComplexField(g, cd(0.0, 0.0));
    CHECK(max_abs(t0(zero)) == 0.0);

    auto one = ComplexField(g, cd(1.0, 0.0));
    auto zeta = ComplexField::coordinate(g);
    CHECK(max_abs_diff(t0(one), conj(zeta) - zeta) < 1e-10);

    rng gen(41);
    for (int rep = 0; rep < 5; ++rep) {
        ComplexField f = random_band_limited(g, gen, 12, 6);
        ComplexField u = t0(f);
        double worst = 0.0;
        BoundaryTrace tr = boundary_trace(u);
        for (cd v : tr.values) worst = std::max(worst, std::abs(v.real()));
        CHECK(worst <= 1e-8);
        // still a right inverse of dbar
        CHECK(max_abs_diff(dbar(u), f) < 1e-6);
    }
}

TEST_CASE("r0 formula, defining relation, and isometry") {
    auto g = build_grid(64, 256);
    auto zero = ComplexField(g, cd(0.0, 0.0));
    CHECK(max_abs(r0(zero)) == 0.0);

    auto one = ComplexField(g, cd(1.0, 0.0));
    CHECK(max_abs_diff(r0(one), cd(-1.0, 0.0) * one) < 1e-10);

    rng gen(2024);
    for (int rep = 0; rep < 100; ++rep) {
        ComplexField f = random_band_limited(g, gen, 16, 8);
        double nf = norm(f, 2.0);
        double ratio = norm(r0(f), 2.0) / nf;
        CHECK(std::abs(ratio - 1.0) <= 1e-6);
    }

    // R0 = dz(T0 .) as the independent second route
    rng gen2(77);
    for (int rep = 0; rep < 3; ++rep) {
        ComplexField f = random_band_limited(g, gen2, 12, 6);
        CHECK(max_abs_diff(r0(f), dz(t0(f))) < 1e-6);
    }
}

TEST_CASE("transforms also work on the composite radial rule") {
    // the composite rule is a fixed-order (panel degree 7) method, so it needs
    // more radial nodes than the global rule for the same probe class
    auto g = build_grid(64, 64, DiscGrid::RadialRule::composite_gl8);
    rng gen(61);
    ComplexField f = random_band_limited(g, gen, 8, 4);
    CHECK(max_abs_diff(dbar(cauchy_green(f)), f) < 1e-6);
    CHECK(std::abs(norm(r0(f), 2.0) / norm(f, 2.0) - 1.0) < 1e-6);
    BoundaryTrace tr = boundary_trace(t0(f));
    for (cd v : tr.values) CHECK(std::abs(v.real()) < 1e-8);
}

TEST_CASE("operator norm estimation") {
    auto g = build_grid(32, 64);
    OperatorNormProfile p2 = estimate_norm(OperatorId::R0, 2.0, 64, 9001, g);
    CHECK(p2.estimate >= 0.98);
    CHECK(p2.estimate <= 1.001);
    CHECK(!p2.alpha.has_value());

    OperatorNormProfile t4a = estimate_norm(OperatorId::T, 4.0, 32, 5, g);
    OperatorNormProfile t4b = estimate_norm(OperatorId::T, 4.0, 32, 5, g);
    CHECK(t4a.estimate == t4b.estimate);
    CHECK(std::isfinite(t4a.estimate));
    CHECK(t4a.alpha.has_value());
    CHECK(*t4a.alpha == doctest::Approx(0.5));

    CHECK_THROWS_AS(estimate_norm(OperatorId::R0, 1.0, 4, 1, g), config_error);
    CHECK_THROWS_AS(estimate_norm(OperatorId::R0, 2.0, 0, 1, g), config_error);
}

TEST_CASE("transforms are safe to call concurrently on a fresh grid") {
    // first use from several threads races the lazy quadrature tables
    auto g = build_grid(24, 48);
    rng gen(99);
    std::vector<ComplexField> inputs, outputs(4, ComplexField(g));
    for (int t = 0; t < 4; ++t) inputs.push_back(random_band_limited(g, gen, 8, 4));
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t] { outputs[t] = r0(inputs[t]); });
    for (auto& th : pool) th.join();
    for (int t = 0; t < 4; ++t)
        CHECK(std::abs(norm(outputs[t], 2.0) / norm(inputs[t], 2.0) - 1.0) < 1e-6);
}

TEST_CASE("log-convexity of the R0 norm estimates in 1/p") {
    auto g = build_grid(32, 64);
    double e2 = estimate_norm(OperatorId::R0, 2.0, 48, 13, g).estimate;
    double e25 = estimate_norm(OperatorId::R0, 2.5, 48, 13, g).estimate;
    double e3 = estimate_norm(OperatorId::R0, 3.0, 48, 13, g).estimate;
    // 1/2.5 = 0.4/2 + 0.6/3, so the Riesz-Thorin bound reads
    // ||R0||_{2.5} <= ||R0||_2^{0.4} ||R0||_3^{0.6}; allow 5% estimator noise
    CHECK(e25 <= std::pow(e2, 0.4) * std::pow(e3, 0.6) * 1.05);
}
