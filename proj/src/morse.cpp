#include "jdisc/morse.hpp"

#include <cmath>
#include <limits>

#include "jdisc/errors.hpp"
#include "jdisc/structure.hpp"

namespace jdisc::morse {

namespace {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

// quintic smoothstep and its integral/derivative; the upper half is evaluated
// through the symmetry s(x) = 1 - s(1-x) to avoid cancellation near 1
double s5(double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    if (x > 0.5) {
        double y = 1.0 - x;
        return 1.0 - (10 - 15 * y + 6 * y * y) * y * y * y;
    }
    return (10 - 15 * x + 6 * x * x) * x * x * x;
}
double ds5(double x) { return x <= 0 || x >= 1 ? 0.0 : 30.0 * x * x * (1 - x) * (1 - x); }
double is5(double x) { // int_0^x s5
    if (x <= 0) return 0.0;
    if (x >= 1) return x - 0.5;
    double x4 = x * x * x * x;
    return 2.5 * x4 - 3.0 * x4 * x + x4 * x * x;
}

// 9th order smoothstep (C^4), used by the slow cutoff template
double s9(double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    auto low = [](double t) {
        double t5 = t * t * t * t * t;
        return t5 * (126 - 420 * t + 540 * t * t - 315 * t * t * t + 70 * t * t * t * t);
    };
    return x > 0.5 ? 1.0 - low(1.0 - x) : low(x);
}
double ds9(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    double u = x * (1 - x);
    return 630.0 * u * u * u * u;
}
double dds9(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    double u = x * (1 - x);
    return 2520.0 * u * u * u * (1 - 2 * x);
}

} // namespace

TakagiResult takagi(const Mat2c& B) {
    if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw usage_error("takagi requires a complex symmetric matrix");

    // antilinear map L(u) = conj(B u) as a real symmetric matrix on (Re u, Im u)
    Eigen::Matrix2d P = B.real(), Q = B.imag();
    Mat4 L;
    L.block<2, 2>(0, 0) = P;
    L.block<2, 2>(0, 2) = -Q;
    L.block<2, 2>(2, 0) = -Q;
    L.block<2, 2>(2, 2) = -P;

    Eigen::SelfAdjointEigenSolver<Mat4> es(L);
    // spectrum is {+s1, +s2, -s2, -s1}; take the two largest
    auto vec_of = [&](int idx) {
        Vec4 v = es.eigenvectors().col(idx);
        return Vec2c(cd(v[0], v[2]), cd(v[1], v[3]));
    };
    Vec2c u1 = vec_of(3);
    Vec2c u2 = vec_of(2);
    u1.normalize();
    u2 -= u1.dot(u2) * u1; // complex Gram-Schmidt (dot conjugates the first factor)
    if (u2.norm() < 0.5) {
        // degenerate eigenspace (B = 0 block): complete the basis explicitly
        Vec2c cands[2] = {Vec2c(1, 0), Vec2c(0, 1)};
        double best = -1.0;
        for (auto& c : cands) {
            Vec2c t = c - u1.dot(c) * u1;
            if (t.norm() > best) {
                best = t.norm();
                u2 = t;
            }
        }
    }
    u2.normalize();

    Vec2c us[2] = {u1, u2};
    TakagiResult out;
    for (int i = 0; i < 2; ++i) {
        Vec2c Bu = B * us[i];
        cd c = us[i](0) * Bu(0) + us[i](1) * Bu(1); // B(u, u), no conjugation
        cd sigma = std::abs(c) == 0.0 ? cd(1.0, 0.0) : std::exp(cd(0.0, -0.5 * std::arg(c)));
        us[i] *= sigma;
        out.d[i] = std::abs(c);
    }
    if (out.d[0] < out.d[1]) {
        std::swap(out.d[0], out.d[1]);
        std::swap(us[0], us[1]);
    }
    out.U.col(0) = us[0];
    out.U.col(1) = us[1];

    if ((out.U.adjoint() * out.U - Mat2c::Identity()).cwiseAbs().maxCoeff() > 1e-12)
        throw construction_error("takagi produced a non-unitary factor");
    Mat2c D = out.U.transpose() * B * out.U;
    if (std::max(std::abs(D(0, 1)), std::abs(D(1, 0))) > 1e-10)
        throw construction_error("takagi failed to diagonalize");
    return out;
}

CutoffProfile slow_cutoff(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw config_error("slow cutoff needs delta in (0, 1)");
    CutoffProfile p;
    p.delta = delta;
    p.transition_scale = 5.5;
    p.support_end = std::exp((1.0 + p.transition_scale) / delta);

    // dense sampled verification of the stated bounds
    double worst1 = 0.0, worst2 = 0.0, prev = 2.0;
    for (int i = 0; i < 10000; ++i) {
        double t = std::exp(std::log(1e-2) +
                            (std::log(p.support_end * 1.01) - std::log(1e-2)) * i / 9999.0);
        double f = p.phi(t);
        if (f > prev + 1e-14) throw construction_error("slow cutoff is not non-increasing");
        prev = f;
        worst1 = std::max(worst1, std::abs(t * p.dphi(t)));
        worst2 = std::max(worst2, std::abs(t * t * p.ddphi(t)));
    }
    if (worst1 > delta || worst2 > delta)
        throw construction_error("slow cutoff bounds |t phi'| <= delta, |t^2 phi''| <= delta failed");
    return p;
}

double CutoffProfile::phi(double t) const {
    if (t <= 1.0) return 1.0;
    double s = delta * std::log(t);
    if (s <= 1.0) return 1.0;
    return 1.0 - s9((s - 1.0) / transition_scale);
}

double CutoffProfile::dphi(double t) const {
    if (t <= 1.0) return 0.0;
    double s = delta * std::log(t);
    if (s <= 1.0 || s >= 1.0 + transition_scale) return 0.0;
    double dpsi = -ds9((s - 1.0) / transition_scale) / transition_scale;
    return dpsi * delta / t;
}

double CutoffProfile::ddphi(double t) const {
    if (t <= 1.0) return 0.0;
    double s = delta * std::log(t);
    if (s <= 1.0 || s >= 1.0 + transition_scale) return 0.0;
    double dpsi = -ds9((s - 1.0) / transition_scale) / transition_scale;
    double ddpsi = -dds9((s - 1.0) / transition_scale) / (transition_scale * transition_scale);
    return ddpsi * delta * delta / (t * t) - dpsi * delta / (t * t);
}

double MorseModel::input_at(cd zeta1, cd zeta2) const {
    double quad = base + std::norm(zeta1) + std::norm(zeta2) -
                  input_a1 * (zeta1 * zeta1).real() - input_a2 * (zeta2 * zeta2).real();
    if (!remainder) return quad;
    Vec2c z = linear_change * Vec2c(zeta1, zeta2);
    return quad + remainder(z[0], z[1]);
}

double MorseModel::evaluate(cd zeta1, cd zeta2) const {
    double r = std::sqrt(std::norm(zeta1) + std::norm(zeta2));
    double quad = base + std::norm(zeta1) + std::norm(zeta2) -
                  input_a1 * (zeta1 * zeta1).real() - input_a2 * (zeta2 * zeta2).real();
    double out = quad;
    if (remainder) {
        double bump = r >= epsilon ? 0.0 : (r <= 0.5 * epsilon ? 1.0 : 1.0 - s5((r / epsilon - 0.5) / 0.5));
        Vec2c z = linear_change * Vec2c(zeta1, zeta2);
        out += remainder(z[0], z[1]) * (1.0 - bump);
    }
    // slow standardization term, supported in |zeta| <= epsilon
    double t = r / inner_radius;
    CutoffProfile prof;
    prof.delta = delta;
    prof.transition_scale = 5.5;
    prof.support_end = std::exp((1.0 + 5.5) / delta);
    double lam = prof.phi(t);
    if (lam != 0.0)
        out += lam * ((input_a1 - a1) * (zeta1 * zeta1).real() +
                      (input_a2 - a2) * (zeta2 * zeta2).real());
    return out;
}

MorseModel morse_normal_form(const QuadraticData& q, int k, double epsilon, double delta,
                             Remainder remainder) {
    if (k < 0 || k > 2) throw config_error("morse index must be 0, 1 or 2");
    if (!(epsilon > 0.0)) throw config_error("cutoff radius epsilon must be positive");
    if ((q.hermitian - q.hermitian.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw usage_error("quadratic data: hermitian part is not hermitian");
    if ((q.symmetric - q.symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw usage_error("quadratic data: symmetric part is not symmetric");

    Eigen::SelfAdjointEigenSolver<Mat2c> es(q.hermitian);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw config_error("hermitian part must be positive definite (strict plurisubharmonicity)");
    // S = hermitian^{-1/2}
    Mat2c S = es.eigenvectors() *
              Eigen::Vector2d(1.0 / std::sqrt(es.eigenvalues()[0]),
                              1.0 / std::sqrt(es.eigenvalues()[1]))
                  .asDiagonal() *
              es.eigenvectors().adjoint();
    Mat2c bprime = S.transpose() * q.symmetric * S;
    TakagiResult tk = takagi(bprime);

    for (double dj : tk.d)
        if (std::abs(dj - 1.0) < 1e-6)
            throw degeneracy_error("Morse coefficient a_j at the excluded value 1: "
                                   "the critical point is not generic");
    int k_computed = (tk.d[0] > 1.0 ? 1 : 0) + (tk.d[1] > 1.0 ? 1 : 0);
    if (k_computed != k) {
        std::string msg = "declared index k does not match the quadratic data (computed ";
        msg += std::to_string(k_computed);
        msg += ")";
        throw config_error(msg);
    }

    MorseModel model;
    model.k = k;
    model.input_a1 = tk.d[0];
    model.input_a2 = tk.d[1];
    model.a1 = tk.d[0] > 1.0 ? 2.0 : 0.0;
    model.a2 = tk.d[1] > 1.0 ? 2.0 : 0.0;
    model.epsilon = epsilon;
    model.delta = delta;
    model.base = q.base;
    model.unitary = tk.U;
    // z = S U diag(i, i) zeta turns the jet into |zeta|^2 - Re sum d_j zeta_j^2
    Mat2c Ph = Mat2c::Zero();
    Ph(0, 0) = cd(0.0, 1.0);
    Ph(1, 1) = cd(0.0, 1.0);
    model.linear_change = S * tk.U * Ph;
    model.remainder = std::move(remainder);

    CutoffProfile prof = slow_cutoff(delta); // validates delta and the template bounds
    model.inner_radius = epsilon / prof.support_end;

    // self-check: the transformed jet must equal the normalized quadratic
    for (cd z1 : {cd(0.3, 0.1), cd(-0.2, 0.4)})
        for (cd z2 : {cd(0.1, -0.3), cd(0.5, 0.2)}) {
            Vec2c z = model.linear_change * Vec2c(z1, z2);
            Vec2c Hz = q.hermitian * z;
            Vec2c Bz = q.symmetric * z;
            double lhs = q.base + (std::conj(z(0)) * Hz(0) + std::conj(z(1)) * Hz(1)).real() +
                         (z(0) * Bz(0) + z(1) * Bz(1)).real();
            double rhs = q.base + std::norm(z1) + std::norm(z2) -
                         model.input_a1 * (z1 * z1).real() - model.input_a2 * (z2 * z2).real();
            if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(lhs)))
                throw construction_error("normal form linear change failed its self-check");
        }
    return model;
}

namespace {

// frozen crossing-profile constants (see the construction notes in the tests):
// identity piece, concave dive, straight descent, tangential landing at tau0,
// then a log-warped smoothstep ramp back to slope 1 at s_c.
constexpr double kAlpha = 0.01;
constexpr double kW1 = 0.03;
constexpr double kM = 0.25;
constexpr double kW3 = 0.06;
constexpr double kW2 = (kAlpha + kW1 * (1.0 - kM) / 2.0 - kM * kW3 / 2.0) / kM;
constexpr double kTau0 = kAlpha + kW1 + kW2 + kW3;
constexpr double kSc = 0.95;

double ramp_speed(double s) { return s5(std::log(s / kTau0) / std::log(kSc / kTau0)); }

} // namespace

double CrossingProfile::dh(double s) const {
    if (s <= kAlpha) return 1.0;
    if (s <= kAlpha + kW1) {
        double t = (s - kAlpha) / kW1;
        return -kM + (1.0 + kM) * (1.0 - s5(t));
    }
    if (s <= kAlpha + kW1 + kW2) return -kM;
    if (s <= kTau0) {
        double t = (s - (kTau0 - kW3)) / kW3;
        return -kM * (1.0 - s5(t));
    }
    if (s <= kSc) return ramp_speed(s);
    return 1.0;
}

double CrossingProfile::ddh(double s) const {
    if (s <= kAlpha) return 0.0;
    if (s <= kAlpha + kW1) return -(1.0 + kM) * ds5((s - kAlpha) / kW1) / kW1;
    if (s <= kAlpha + kW1 + kW2) return 0.0;
    if (s <= kTau0) return kM * ds5((s - (kTau0 - kW3)) / kW3) / kW3;
    if (s <= kSc) {
        double L = std::log(kSc / kTau0);
        return ds5(std::log(s / kTau0) / L) / (L * s);
    }
    return 0.0;
}

double CrossingProfile::h(double s) const {
    if (s <= kAlpha) return s;
    if (s <= kAlpha + kW1) {
        double t = (s - kAlpha) / kW1;
        return kAlpha - kM * (s - kAlpha) + (1.0 + kM) * kW1 * (t - is5(t));
    }
    double hB1 = kAlpha + kW1 * (1.0 - kM) / 2.0;
    if (s <= kAlpha + kW1 + kW2) return hB1 - kM * (s - kAlpha - kW1);
    double hB2 = hB1 - kM * kW2;
    if (s <= kTau0) {
        double t = (s - (kTau0 - kW3)) / kW3;
        return hB2 - kM * kW3 * (t - is5(t));
    }
    // ramp: integrate the speed with a fixed Gauss rule (smooth integrand)
    static const double gx[10] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
                                  -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
                                  0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
                                  0.9739065285171717};
    static const double gw[10] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
                                  0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
                                  0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                                  0.0666713443086881};
    double top = std::min(s, kSc);
    double acc = 0.0;
    const int panels = 6;
    for (int p = 0; p < panels; ++p) {
        double a = kTau0 + (top - kTau0) * p / panels;
        double b = kTau0 + (top - kTau0) * (p + 1) / panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < 10; ++i) acc += half * gw[i] * ramp_speed(mid + half * gx[i]);
    }
    if (s <= kSc) return acc;
    return acc + (s - kSc);
}

double CrossingProfile::uprime_sq(cd w1, cd w2) const {
    double s = w1.real() * w1.real();
    if (k == 2) s += w2.real() * w2.real();
    return s;
}

double CrossingProfile::rho_hat(cd w1, cd w2) const {
    double v1 = w1.imag(), v2 = w2.imag(), u1 = w1.real(), u2 = w2.real();
    if (k == 1) return 3 * v1 * v1 + v2 * v2 - u1 * u1 + u2 * u2;
    return 3 * v1 * v1 + 3 * v2 * v2 - u1 * u1 - u2 * u2;
}

double CrossingProfile::phi(cd w1, cd w2) const {
    double v1 = w1.imag(), v2 = w2.imag(), u1 = w1.real(), u2 = w2.real();
    if (k == 1) return 3 * v1 * v1 + v2 * v2 - h(u1 * u1) + u2 * u2;
    return 3 * v1 * v1 + 3 * v2 * v2 - h(u1 * u1 + u2 * u2);
}

CrossingProfile crossing_profile(int k) {
    if (k != 1 && k != 2) throw config_error("crossing profile needs k in {1, 2}");
    CrossingProfile cp;
    cp.k = k;
    cp.box_halfwidth = 1.25;
    cp.tau1 = kSc - cp.h(kSc);

    // measure tau0 (tangency of g = s - h with the diagonal) and the hump height
    double tau0 = 0.0;
    double hump = 0.0;
    double smax = cp.box_halfwidth * cp.box_halfwidth * (k == 2 ? 2.0 : 1.0) + 0.1;
    const int N = 200000;
    double worst_i = 0.0;
    for (int i = 1; i <= N; ++i) {
        double s = smax * i / N;
        double hv = cp.h(s);
        double g = s - hv;
        if (hv < -1e-9) throw construction_error("crossing profile: h < 0");
        if (g < -1e-9 || g > cp.tau1 + 1e-9)
            throw construction_error("crossing profile: property (i) failed");
        if (s >= 1.0 && std::abs(g - cp.tau1) > 1e-9)
            throw construction_error("crossing profile: property (iii) failed");
        if (tau0 == 0.0 && s > kAlpha && hv <= 1e-9) tau0 = s;
        if (s <= kTau0 + 1e-12) hump = std::max(hump, hv);
    }
    if (tau0 == 0.0) throw construction_error("crossing profile: tangency point not found");
    cp.tau0 = tau0;
    for (int i = 1; i <= N; ++i) {
        double s = tau0 + (smax - tau0) * i / N;
        double g = s - cp.h(s);
        worst_i = std::min(worst_i, g - tau0);
    }
    if (worst_i < -1e-6) throw construction_error("crossing profile: property (ii) failed");
    if (!(cp.tau0 > 0.0 && cp.tau0 < cp.tau1 && cp.tau1 < 1.0))
        throw construction_error("crossing profile: 0 < tau0 < tau1 < 1 failed");
    cp.hump_height = hump;

    // strict plurisubharmonicity certificate over the sample box
    acs::ScalarFn u = [&cp](cd a, cd b) { return cp.phi(a, b); };
    double min_eig = std::numeric_limits<double>::infinity();
    const int nb = 7;
    for (int i0 = 0; i0 < nb; ++i0)
        for (int i1 = 0; i1 < nb; ++i1)
            for (int i2 = 0; i2 < nb; ++i2)
                for (int i3 = 0; i3 < nb; ++i3) {
                    auto c = [&](int t) {
                        return cp.box_halfwidth * (2.0 * t / (nb - 1) - 1.0);
                    };
                    acs::BidiscPoint p{cd(c(i0), c(i1)), cd(c(i2), c(i3))};
                    min_eig = std::min(min_eig, acs::levi_min_eigenvalue(u, p, 2e-4));
                }
    cp.min_levi_eigenvalue = min_eig;
    if (!(min_eig > 0.0))
        throw construction_error("crossing profile: strict plurisubharmonicity failed");
    return cp;
}

TotallyRealSet totally_real_E(double c0, int k) {
    if (!(c0 > 0.0)) throw config_error("totally real set needs c0 > 0");
    if (k != 1 && k != 2) throw config_error("totally real set needs k in {1, 2}");
    return {c0, k};
}

bool TotallyRealSet::contains(cd z1, cd z2) const {
    if (k == 1)
        return z1.imag() == 0.0 && z2 == cd(0.0, 0.0) && z1.real() * z1.real() <= c0;
    return z1.imag() == 0.0 && z2.imag() == 0.0 &&
           z1.real() * z1.real() + z2.real() * z2.real() <= c0;
}

double TotallyRealSet::distance(cd z1, cd z2) const {
    double root = std::sqrt(c0);
    if (k == 1) {
        double dx = std::max(0.0, std::abs(z1.real()) - root);
        return std::sqrt(dx * dx + z1.imag() * z1.imag() + std::norm(z2));
    }
    double xn = std::hypot(z1.real(), z2.real());
    double dx = std::max(0.0, xn - root);
    return std::sqrt(dx * dx + z1.imag() * z1.imag() + z2.imag() * z2.imag());
}

} // namespace jdisc::morse
