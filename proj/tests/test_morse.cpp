#include <doctest.h>

#include <cmath>

#include "jdisc/errors.hpp"
#include "jdisc/morse.hpp"
#include "jdisc/rng.hpp"
#include "jdisc/structure.hpp"

using namespace jdisc;
using namespace jdisc::morse;

namespace {

// closed-form singular values of a 2x2 complex matrix (eigenvalues of B^H B)
void singular_values(const Mat2c& B, double sv[2]) {
    Mat2c G = B.adjoint() * B;
    double tr = G.trace().real();
    double det = std::abs(G.determinant());
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    sv[0] = std::sqrt(std::max(0.0, tr / 2.0 + disc));
    sv[1] = std::sqrt(std::max(0.0, tr / 2.0 - disc));
}

Mat2c random_symmetric(rng& gen) {
    cd a = gen.normal_complex(), b = gen.normal_complex(), c = gen.normal_complex();
    Mat2c B;
    B << a, b, b, c;
    return B;
}

} // namespace

TEST_CASE("takagi on simple inputs") {
    Mat2c Z = Mat2c::Zero();
    TakagiResult t0 = takagi(Z);
    CHECK(t0.d[0] == 0.0);
    CHECK(t0.d[1] == 0.0);
    CHECK((t0.U.adjoint() * t0.U - Mat2c::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    Mat2c D2 = Mat2c::Zero();
    D2(0, 0) = cd(2.0, 0.0);
    D2(1, 1) = cd(2.0, 0.0);
    TakagiResult t2 = takagi(D2);
    CHECK(t2.d[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(t2.d[1] == doctest::Approx(2.0).epsilon(1e-14));
    // U is a phase/permutation matrix: |entries| are 0 or 1
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double m = std::abs(t2.U(i, j));
            CHECK((m < 1e-12 || std::abs(m - 1.0) < 1e-12));
        }

    Mat2c asym;
    asym << cd(1, 0), cd(2, 0), cd(3, 0), cd(4, 0);
    CHECK_THROWS_AS(takagi(asym), usage_error);
}

TEST_CASE("takagi matches singular values on seeded random matrices") {
    rng gen(424242);
    for (int rep = 0; rep < 1000; ++rep) {
        Mat2c B = random_symmetric(gen);
        TakagiResult t = takagi(B);
        CHECK((t.U.adjoint() * t.U - Mat2c::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
        Mat2c D = t.U.transpose() * B * t.U;
        CHECK(std::abs(D(0, 1)) <= 1e-10);
        CHECK(std::abs(D(1, 0)) <= 1e-10);
        CHECK(D(0, 0).imag() == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(t.d[0] >= t.d[1]);
        CHECK(t.d[1] >= 0.0);
        double sv[2];
        singular_values(B, sv);
        CHECK(std::abs(t.d[0] - sv[0]) <= 1e-10);
        CHECK(std::abs(t.d[1] - sv[1]) <= 1e-10);
    }
}

namespace {

QuadraticData data_for_index(int k) {
    QuadraticData q;
    q.base = 0.25;
    q.hermitian << cd(1.0, 0.0), cd(0.15, 0.1), cd(0.15, -0.1), cd(0.8, 0.0);
    if (k == 0)
        q.symmetric << cd(0.3, 0.1), cd(0.05, 0.0), cd(0.05, 0.0), cd(0.1, -0.2);
    else if (k == 1)
        q.symmetric << cd(2.2, 0.4), cd(0.1, 0.05), cd(0.1, 0.05), cd(0.2, 0.1);
    else
        q.symmetric << cd(2.4, 0.3), cd(0.2, -0.1), cd(0.2, -0.1), cd(-1.4, 1.9);
    return q;
}

} // namespace

TEST_CASE("morse normal form standardizes the coefficients by index") {
    double want[3][2] = {{0, 0}, {2, 0}, {2, 2}};
    for (int k = 0; k <= 2; ++k) {
        QuadraticData q = data_for_index(k);
        MorseModel m = morse_normal_form(q, k, 0.4, 0.2);
        CHECK(m.a1 == want[k][0]);
        CHECK(m.a2 == want[k][1]);
        CHECK(m.k == k);

        // wrong declared index is rejected
        CHECK_THROWS_AS(morse_normal_form(q, (k + 1) % 3, 0.4, 0.2), config_error);
    }
}

TEST_CASE("morse normal form rejects degenerate and invalid data") {
    QuadraticData q;
    q.hermitian = Mat2c::Identity();
    q.symmetric = Mat2c::Zero();
    q.symmetric(0, 0) = cd(1.0, 0.0); // Takagi value exactly 1
    q.symmetric(1, 1) = cd(0.2, 0.0);
    CHECK_THROWS_AS(morse_normal_form(q, 0, 0.4, 0.2), degeneracy_error);

    QuadraticData bad;
    bad.hermitian << cd(1.0, 0.0), cd(0.0, 0.0), cd(0.0, 0.0), cd(-0.5, 0.0);
    CHECK_THROWS_AS(morse_normal_form(bad, 0, 0.4, 0.2), config_error);

    QuadraticData q0 = data_for_index(0);
    CHECK_THROWS_AS(morse_normal_form(q0, 0, -1.0, 0.2), config_error);
    CHECK_THROWS_AS(morse_normal_form(q0, 0, 0.4, 1.7), config_error);
}

TEST_CASE("morse model: near-origin form, shell match, plurisubharmonicity") {
    double eps = 0.4, delta = 0.2;
    Remainder rem = [](cd z1, cd z2) {
        return 0.05 * std::pow(z1.real(), 3) + 0.04 * z1.real() * std::norm(z2);
    };
    for (int k : {0, 1, 2}) {
        QuadraticData q = data_for_index(k);
        MorseModel m = morse_normal_form(q, k, eps, delta, rem);

        // inside the inner radius the model is exactly the standardized form
        rng gen(100 + k);
        for (int rep = 0; rep < 40; ++rep) {
            double r = m.inner_radius * gen.uniform();
            double t1 = gen.uniform(0.0, 6.283), t2 = gen.uniform(0.0, 6.283);
            double c = gen.uniform();
            cd z1 = r * c * cd(std::cos(t1), std::sin(t1));
            cd z2 = r * std::sqrt(1 - c * c) * cd(std::cos(t2), std::sin(t2));
            double want = m.base + std::norm(z1) + std::norm(z2) -
                          m.a1 * (z1 * z1).real() - m.a2 * (z2 * z2).real();
            CHECK(std::abs(m.evaluate(z1, z2) - want) <= 1e-9);
        }

        // outside the epsilon ball the model equals the input function
        for (int rep = 0; rep < 60; ++rep) {
            double r = eps * (1.0 + 0.02 + 0.4 * gen.uniform());
            double t1 = gen.uniform(0.0, 6.283), t2 = gen.uniform(0.0, 6.283);
            double c = gen.uniform();
            cd z1 = r * c * cd(std::cos(t1), std::sin(t1));
            cd z2 = r * std::sqrt(1 - c * c) * cd(std::cos(t2), std::sin(t2));
            CHECK(std::abs(m.evaluate(z1, z2) - m.input_at(z1, z2)) <= 1e-9);
        }

        // strictly plurisubharmonic at sampled points of the epsilon ball
        acs::ScalarFn u = [&m](cd a, cd b) { return m.evaluate(a, b); };
        double min_eig = 1e9;
        double min_grad_ratio = 1e9;
        for (int rep = 0; rep < 120; ++rep) {
            double r = eps * (0.05 + 0.95 * gen.uniform());
            double t1 = gen.uniform(0.0, 6.283), t2 = gen.uniform(0.0, 6.283);
            double c = gen.uniform();
            cd z1 = r * c * cd(std::cos(t1), std::sin(t1));
            cd z2 = r * std::sqrt(1 - c * c) * cd(std::cos(t2), std::sin(t2));
            min_eig = std::min(min_eig, acs::levi_min_eigenvalue(u, {z1, z2}, 1e-4));
            // gradient never vanishes away from the critical point at 0
            double h = 1e-6, g2 = 0.0;
            for (int a = 0; a < 4; ++a) {
                cd d1 = a == 0 ? cd(h, 0) : a == 1 ? cd(0, h) : cd(0, 0);
                cd d2 = a == 2 ? cd(h, 0) : a == 3 ? cd(0, h) : cd(0, 0);
                double gp = (m.evaluate(z1 + d1, z2 + d2) - m.evaluate(z1 - d1, z2 - d2)) /
                            (2 * h);
                g2 += gp * gp;
            }
            min_grad_ratio = std::min(min_grad_ratio, std::sqrt(g2) / r);
        }
        CHECK(min_eig > 0.0);
        CHECK(min_grad_ratio > 0.1);
    }
}

TEST_CASE("slow cutoff bounds and support growth") {
    CHECK_THROWS_AS(slow_cutoff(0.0), config_error);
    CHECK_THROWS_AS(slow_cutoff(1.0), config_error);
    CHECK_THROWS_AS(slow_cutoff(-0.2), config_error);

    double ends[3];
    int idx = 0;
    for (double delta : {0.2, 0.1, 0.05}) {
        CutoffProfile p = slow_cutoff(delta);
        CHECK(p.phi(0.0) == 1.0);
        for (double t : {0.1, 0.5, 0.99, 1.0}) CHECK(p.phi(t) == 1.0);
        CHECK(p.phi(p.support_end * 1.0001) == 0.0);
        double w1 = 0.0, w2 = 0.0, prev = 1.5;
        for (int i = 0; i < 10000; ++i) {
            double t = std::exp(std::log(0.5) +
                                (std::log(p.support_end * 1.05) - std::log(0.5)) * i / 9999.0);
            w1 = std::max(w1, std::abs(t * p.dphi(t)));
            w2 = std::max(w2, std::abs(t * t * p.ddphi(t)));
            double f = p.phi(t);
            CHECK(f <= prev + 1e-14);
            prev = f;
        }
        CHECK(w1 <= delta);
        CHECK(w2 <= delta);
        ends[idx++] = p.support_end;
    }
    // support endpoint grows like exp(c / delta)
    CHECK(std::log(ends[1]) / std::log(ends[0]) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::log(ends[2]) / std::log(ends[1]) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("crossing profile properties") {
    CHECK_THROWS_AS(crossing_profile(0), config_error);
    CHECK_THROWS_AS(crossing_profile(3), config_error);

    for (int k : {1, 2}) {
        CrossingProfile cp = crossing_profile(k);
        CHECK(cp.tau0 > 0.0);
        CHECK(cp.tau0 < cp.tau1);
        CHECK(cp.tau1 < 1.0);
        CHECK(cp.min_levi_eigenvalue > 0.0);

        rng gen(7 + k);
        for (int rep = 0; rep < 4000; ++rep) {
            cd w1(gen.uniform(-1.25, 1.25), gen.uniform(-1.25, 1.25));
            cd w2(gen.uniform(-1.25, 1.25), gen.uniform(-1.25, 1.25));
            double p = cp.phi(w1, w2), r = cp.rho_hat(w1, w2);
            double s = cp.uprime_sq(w1, w2);
            CHECK(p >= r - 1e-9);                    // (i) lower
            CHECK(p <= r + cp.tau1 + 1e-9);          // (i) upper
            if (s >= cp.tau0) CHECK(p >= r + cp.tau0 - 1e-6); // (ii)
            if (s >= 1.0) CHECK(p == doctest::Approx(r + cp.tau1).epsilon(1e-9)); // (iii)
        }
    }
}

TEST_CASE("crossing profile: level-set inclusion spot checks") {
    for (int k : {1, 2}) {
        CrossingProfile cp = crossing_profile(k);
        TotallyRealSet E = totally_real_E(1.0, k);
        rng gen(55 + k);
        double fatten = 0.0;
        for (int rep = 0; rep < 20000; ++rep) {
            cd w1(gen.uniform(-1.25, 1.25), gen.uniform(-1.25, 1.25));
            cd w2(gen.uniform(-1.25, 1.25), gen.uniform(-1.25, 1.25));
            double p = cp.phi(w1, w2), r = cp.rho_hat(w1, w2);
            // {rho_hat <= -1} union E  inside  {phi <= 0}
            if (r <= -1.0) CHECK(p <= 0.0);
            // {rho_hat <= 1} inside {phi <= 2} inside {rho_hat < 3}
            if (r <= 1.0) CHECK(p <= 2.0);
            if (p <= 2.0) CHECK(r < 3.0);
            // {phi <= 0} inside {rho_hat <= -tau0} union (neighborhood of E):
            // points violating the first alternative sit within sqrt(hump) of E
            if (p <= 0.0 && r > -cp.tau0) fatten = std::max(fatten, E.distance(w1, w2));
        }
        // E itself lies in {phi <= 0}
        for (int rep = 0; rep < 200; ++rep) {
            double x1 = gen.uniform(-1.0, 1.0);
            double x2 = k == 2 ? gen.uniform(-1.0, 1.0) : 0.0;
            if (x1 * x1 + x2 * x2 > 1.0) continue;
            CHECK(cp.phi(cd(x1, 0.0), cd(x2, 0.0)) <= 1e-12);
        }
        CHECK(fatten <= std::sqrt(cp.hump_height) + 1e-6);
    }
}

TEST_CASE("totally real slab membership and distance") {
    CHECK_THROWS_AS(totally_real_E(0.0, 1), config_error);
    CHECK_THROWS_AS(totally_real_E(1.0, 0), config_error);

    for (int k : {1, 2}) {
        TotallyRealSet E = totally_real_E(0.49, k);
        CHECK(E.contains(cd(0, 0), cd(0, 0)));
        CHECK(E.distance(cd(0, 0), cd(0, 0)) == 0.0);
        // boundary point |x'|^2 = c0
        CHECK(E.contains(cd(0.7, 0.0), cd(0, 0)));
        CHECK(E.distance(cd(0.7, 0.0), cd(0, 0)) == 0.0);
        // off-slab in the y direction
        CHECK(!E.contains(cd(0.0, 0.3), cd(0, 0)));
        CHECK(E.distance(cd(0.0, 0.3), cd(0, 0)) == doctest::Approx(0.3));
        // beyond the x' cap
        CHECK(!E.contains(cd(0.9, 0.0), cd(0, 0)));
        CHECK(E.distance(cd(0.9, 0.0), cd(0, 0)) == doctest::Approx(0.2).epsilon(1e-12));
    }
    TotallyRealSet E1 = totally_real_E(1.0, 1);
    CHECK(!E1.contains(cd(0.2, 0.0), cd(0.3, 0.0))); // z'' must vanish when k = 1
    TotallyRealSet E2 = totally_real_E(1.0, 2);
    CHECK(E2.contains(cd(0.2, 0.0), cd(0.3, 0.0)));
}
