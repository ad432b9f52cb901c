#pragma once

#include <Eigen/Dense>
#include <functional>

#include "jdisc/grid.hpp"

namespace jdisc::morse {

using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;

struct TakagiResult {
    Mat2c U;     // unitary
    double d[2]; // d[0] >= d[1] >= 0, U^t B U = diag(d)
};

/// Takagi factorization of a complex symmetric 2x2 matrix: U^t B U diagonal
/// with nonnegative entries. Realized through the antilinear map
/// L(u) = conj(B u) (the unique map with <x, L(u)> = B(x, u)) as a real
/// symmetric 4x4 eigenproblem, followed by unit phase rotations of the
/// eigenvectors. The diagonal entries are the singular values of B.
TakagiResult takagi(const Mat2c& B);

/// Quadratic jet of a strictly plurisubharmonic function at a critical point:
/// rho(z) = base + z* H z + Re(z^t Bsym z) + O(|z|^3).
struct QuadraticData {
    Mat2c hermitian = Mat2c::Identity(); // positive definite
    Mat2c symmetric = Mat2c::Zero();
    double base = 0.0;
};

/// Remainder in the input coordinates; must be O(|z|^3) near 0.
using Remainder = std::function<double(cd, cd)>;

/// Deformed normal form around a nondegenerate critical point of index k.
/// In normalized coordinates zeta (original z = linear_change * zeta):
///   evaluate(zeta) = base + |zeta|^2 - sum_j a_in_j Re zeta_j^2
///                    + remainder(T zeta) (1 - bump(|zeta|/epsilon))
///                    + slow(|zeta|) sum_j (a_in_j - a_j) Re zeta_j^2  ... sign folded in
/// It equals the standardized form (coefficients a1, a2 in {0, 2}) for
/// |zeta| <= inner_radius and the input function for |zeta| >= epsilon.
struct MorseModel {
    int k = 0;
    double a1 = 0.0, a2 = 0.0;             // standardized coefficients
    double input_a1 = 0.0, input_a2 = 0.0; // Takagi values of the normalized jet
    double epsilon = 0.0;
    double delta = 0.0;
    double inner_radius = 0.0; // epsilon / (slow cutoff support ratio)
    Mat2c linear_change = Mat2c::Identity();
    Mat2c unitary = Mat2c::Identity();
    double base = 0.0;
    Remainder remainder; // may be empty

    double evaluate(cd zeta1, cd zeta2) const;
    /// The input function expressed in normalized coordinates.
    double input_at(cd zeta1, cd zeta2) const;
};

MorseModel morse_normal_form(const QuadraticData& q, int k, double epsilon, double delta,
                             Remainder remainder = {});

/// Slow cut-off: phi = 1 on [0, 1], non-increasing, compactly supported, with
/// |t phi'(t)| <= delta and |t^2 phi''(t)| <= delta everywhere. Built as
/// phi(t) = psi(delta ln t) for a fixed smooth non-increasing template psi
/// with ||psi'|| <= 1/2, ||psi''|| <= 1/2; the support endpoint grows like
/// exp(c / delta).
struct CutoffProfile {
    double delta = 0.0;
    double transition_scale = 0.0; // template descent length S
    double support_end = 0.0;      // exp((1 + S)/delta)

    double phi(double t) const;
    double dphi(double t) const;
    double ddphi(double t) const;
};

CutoffProfile slow_cutoff(double delta);

/// Critical-level crossing profile: for the dilated normal form
///   rho_hat = 3 v1^2 + v2^2 - u1^2 + u2^2            (k = 1)
///   rho_hat = 3 v1^2 + 3 v2^2 - u1^2 - u2^2          (k = 2)
/// returns phi = rho_hat + g(|u'|^2) built from an explicit C^2 profile h
/// (g = s - h) with measured constants 0 < tau0 < tau1 < 1 such that
///   (i)   rho_hat <= phi <= rho_hat + tau1,
///   (ii)  phi >= rho_hat + tau0 on {|u'|^2 >= tau0},
///   (iii) phi  = rho_hat + tau1 on {|u'|^2 >= 1},
/// and phi strictly plurisubharmonic over the sample box.
struct CrossingProfile {
    int k = 1;
    double tau0 = 0.0, tau1 = 0.0;
    double min_levi_eigenvalue = 0.0;
    double box_halfwidth = 0.0;
    double hump_height = 0.0; // max of h on [0, tau0]

    double h(double s) const;
    double dh(double s) const;
    double ddh(double s) const;
    double rho_hat(cd w1, cd w2) const;
    double phi(cd w1, cd w2) const;
    double uprime_sq(cd w1, cd w2) const;
};

CrossingProfile crossing_profile(int k);

/// The totally real slab E = { y' = 0, z'' = 0, |x'|^2 <= c0 }, where the
/// primed part is z1 (k = 1) or (z1, z2) (k = 2).
struct TotallyRealSet {
    double c0 = 0.0;
    int k = 1;

    bool contains(cd z1, cd z2) const;
    double distance(cd z1, cd z2) const;
};

TotallyRealSet totally_real_E(double c0, int k);

} // namespace jdisc::morse
