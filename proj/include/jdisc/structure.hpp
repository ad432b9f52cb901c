#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "jdisc/coefficients.hpp"
#include "jdisc/grid.hpp"

namespace jdisc::acs {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;

/// Point of the bidisc domain |z| <= 1, |w| <= 1 + gamma.
struct BidiscPoint {
    cd z;
    cd w;
};

/// Standard complex structure of C^2 in real coordinates (x1, y1, x2, y2).
Mat4 j_standard();
Mat2 j_standard_2();

Vec2c complex_of(const Vec4& v);
Vec4 real_of(const Vec2c& v);

/// Almost complex structure field J(z, w) on the closed bidisc, J^2 = -I at
/// every point. Holds its generator, so it can be evaluated anywhere; a fixed
/// sample set (including the w = 0 slice) is cached for certification sweeps.
class StructureField {
public:
    /// entry (row, col) += Re(c z^i conj(z)^j w^k conj(w)^l)
    struct PerturbTerm {
        int row = 0, col = 0;
        cd c;
        int i = 0, j = 0, k = 0, l = 0;
    };

    /// J_st everywhere.
    static StructureField standard(double gamma);

    /// Polynomial perturbation of J_st projected onto {J^2 = -I} (iterated
    /// inverse-square-root correction to machine accuracy).
    static StructureField from_perturbation(std::vector<PerturbTerm> terms, double gamma);

    /// Synthetic admissible example: lower-triangular block structure with
    /// J11 the complex structure of Beltrami coefficient mu(z,w) = mu_scale * w
    /// and J21 = J_st Y - Y J11 for a small Y vanishing at w = 0. Satisfies
    /// J^2 = -I exactly and the admissibility block conditions by construction.
    static StructureField bundled_admissible(double gamma, double mu_scale = 0.08,
                                             double nu_scale = 0.05);

    /// Wraps an arbitrary generator. The caller is responsible for J^2 = -I;
    /// the constructor only asserts it on the sample set.
    static StructureField from_generator(std::function<Mat4(cd, cd)> gen, double gamma);

    Mat4 eval(cd z, cd w) const { return gen_(z, w); }
    double gamma() const { return gamma_; }
    const std::vector<BidiscPoint>& samples() const { return samples_; }

    /// Worst |J^2 + I| entry over the cached samples.
    double square_defect() const;

private:
    StructureField(std::function<Mat4(cd, cd)> gen, double gamma);

    std::function<Mat4(cd, cd)> gen_;
    double gamma_ = 0.0;
    std::vector<BidiscPoint> samples_;
};

/// Complex 2x2 matrix A with A v = (J_st + J)^{-1} (J_st - J) conj(v).
/// Throws degeneracy_error when J_st + J is singular. clin_deviation reports
/// how far the real operator is from anticommuting with J_st (the complex
/// linearity certificate).
Mat2c a_matrix_at(const Mat4& J, double* clin_deviation = nullptr);

/// Inverse of the defining relation: rebuild J from A.
Mat4 j_from_a(const Mat2c& A);

struct AMatrixSample {
    BidiscPoint at;
    Mat2c A;
};

struct AMatrixField {
    std::vector<AMatrixSample> samples;
    double max_clin_deviation = 0.0;
    double max_second_column = 0.0; // block-structure consequence for admissible J
};

AMatrixField matrix_a_from_j(const StructureField& S);

struct BlockReport {
    double dev_j12 = 0.0;    // J12 = 0 everywhere
    double dev_j22 = 0.0;    // J22 = J_st everywhere
    double dev_j11_w0 = 0.0; // J11(z, 0) = J_st
    double dev_j21_w0 = 0.0; // J21(z, 0) = 0
    bool pass = false;       // all deviations <= 1e-8
    std::string worst_block;
};

BlockReport verify_block_structure(const StructureField& S);

/// Minimum of |det(J + J_st)| over the sample set.
double nondegeneracy_check(const StructureField& S);

struct FitOptions {
    int z_degree = 2;       // max i + j
    int w_degree = 6;       // max k + l (>= 1 enforced structurally)
    double tolerance = 1e-7;
    // angular sample counts must exceed twice the degree, or aliased monomial
    // pairs coincide at every sample and the fit is free to split between them
    int z_radii = 8, z_angles = 12;
    int w_radii = 8, w_angles = 16;
    double drop_below = 1e-10; // discard fitted monomials smaller than this
};

/// Fits a := A11 and b := A21 as monomial expansions vanishing at w = 0 and
/// packages them as a CoefficientPair. Throws approximation_error if the fit
/// residual exceeds the tolerance and ellipticity_error if |a| reaches 1.
CoefficientPair coefficients_from_structure(const StructureField& S, double gamma,
                                            const FitOptions& opts = {});

using ScalarFn = std::function<double(cd, cd)>;
using StructureFn = std::function<Mat4(cd, cd)>;

struct LeviSample {
    double value = 0.0;
    double richardson_gap = 0.0;
    bool reliable = true;
};

/// Levi form -d(J* du)(v, Jv) at p by second-order finite differences with
/// Richardson extrapolation (h and h/2); the gap between the two steps flags
/// unreliable samples.
LeviSample levi_form(const ScalarFn& u, const StructureFn& J, const BidiscPoint& p,
                     const Vec4& v, double h = 1e-4);

/// Minimum Levi eigenvalue at J_st via polarization over four directions.
double levi_min_eigenvalue(const ScalarFn& u, const BidiscPoint& p, double h = 1e-4);

/// Quadratic coordinate change z -> z + sum a_kj z_k conj(z_j).
struct NormalizationMap {
    cd a[2][2][2] = {}; // a[i][k][j]: coefficient of z_k conj(z_j) in component i

    BidiscPoint apply(const BidiscPoint& p) const;
    BidiscPoint invert(const BidiscPoint& q) const; // Newton, small |q|
    /// d(phi) at p as a real 4x4 matrix.
    Mat4 jacobian(const BidiscPoint& p) const;
};

struct NormalizationResult {
    NormalizationMap map;
    double a_z_before = 0.0; // ||dA/dz(0)|| prior to the change
    double a_z_after = 0.0;  // finite-difference re-extraction after the change
};

/// Solves for the a_kj annihilating the first-order z-derivatives of the
/// pushed-forward A at the origin; requires A(0) ~ 0.
NormalizationResult normalize_coordinates(const StructureField& S);

/// A in the new coordinates q = map(p), via the transformation law
/// A' = (Phi_z A + Phi_zbar)(conj(Phi_z) + conj(Phi_zbar) A)^{-1}.
Mat2c pushed_a(const NormalizationMap& map, const StructureField& S, const BidiscPoint& q);

/// Pushforward structure dphi J dphi^{-1} at phi^{-1}(q), as a callable.
StructureFn pushforward_structure(const NormalizationMap& map, const StructureField& S);

} // namespace jdisc::acs
