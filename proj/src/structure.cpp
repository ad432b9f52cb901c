#include "jdisc/structure.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "jdisc/errors.hpp"

namespace jdisc::acs {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

std::vector<BidiscPoint> make_samples(double gamma) {
    std::vector<BidiscPoint> out;
    std::vector<cd> zs, ws;
    zs.push_back(cd(0.0, 0.0));
    for (double r : {0.3, 0.6, 0.85, 1.0})
        for (int a = 0; a < 8; ++a) {
            double t = kTau * a / 8;
            zs.push_back(cd(r * std::cos(t), r * std::sin(t)));
        }
    ws.push_back(cd(0.0, 0.0)); // the w = 0 slice is needed by the block checks
    for (double r : {0.3, 0.6, 0.85, 1.0})
        for (int a = 0; a < 8; ++a) {
            double t = kTau * a / 8;
            ws.push_back((1.0 + gamma) * cd(r * std::cos(t), r * std::sin(t)));
        }
    out.reserve(zs.size() * ws.size());
    for (cd z : zs)
        for (cd w : ws) out.push_back({z, w});
    return out;
}

cd ipow(cd z, int n) {
    cd out(1.0, 0.0);
    for (int k = 0; k < n; ++k) out *= z;
    return out;
}

// Newton-Schulz inverse square root: projects X with X^2 close to -I onto an
// exact complex structure X * (-X^2)^{-1/2} (the factor commutes with X).
Mat4 project_structure(const Mat4& X) {
    Mat4 N = -X * X;
    Mat4 I = Mat4::Identity();
    if ((N - I).norm() > 0.9)
        throw construction_error("perturbation too large to project onto J^2 = -I");
    Mat4 Z = I;
    for (int it = 0; it < 60; ++it) {
        Mat4 R = I - N * Z * Z;
        if (R.norm() < 1e-15) break;
        Z = 0.5 * Z * (3.0 * I - N * Z * Z);
    }
    return X * Z;
}

Mat2 beltrami_hat(cd mu) {
    Mat2 A;
    A << mu.real(), mu.imag(), mu.imag(), -mu.real();
    return A;
}

} // namespace

Mat4 j_standard() {
    Mat4 J = Mat4::Zero();
    J(0, 1) = -1.0;
    J(1, 0) = 1.0;
    J(2, 3) = -1.0;
    J(3, 2) = 1.0;
    return J;
}

Mat2 j_standard_2() {
    Mat2 J;
    J << 0.0, -1.0, 1.0, 0.0;
    return J;
}

Vec2c complex_of(const Vec4& v) { return Vec2c(cd(v[0], v[1]), cd(v[2], v[3])); }

Vec4 real_of(const Vec2c& v) {
    return Vec4(v[0].real(), v[0].imag(), v[1].real(), v[1].imag());
}

StructureField::StructureField(std::function<Mat4(cd, cd)> gen, double gamma)
    : gen_(std::move(gen)), gamma_(gamma), samples_(make_samples(gamma)) {}

StructureField StructureField::standard(double gamma) {
    return StructureField([](cd, cd) { return j_standard(); }, gamma);
}

StructureField StructureField::from_perturbation(std::vector<PerturbTerm> terms, double gamma) {
    for (const auto& t : terms)
        if (t.row < 0 || t.row > 3 || t.col < 0 || t.col > 3 || t.i < 0 || t.j < 0 ||
            t.k < 0 || t.l < 0)
            throw config_error("bad structure perturbation term");
    auto gen = [terms](cd z, cd w) {
        Mat4 X = j_standard();
        for (const auto& t : terms) {
            cd m = t.c * ipow(z, t.i) * ipow(std::conj(z), t.j) * ipow(w, t.k) *
                   ipow(std::conj(w), t.l);
            X(t.row, t.col) += m.real();
        }
        return project_structure(X);
    };
    StructureField S(gen, gamma);
    if (S.square_defect() > 1e-10)
        throw construction_error("projected structure violates J^2 = -I");
    return S;
}

StructureField StructureField::bundled_admissible(double gamma, double mu_scale,
                                                  double nu_scale) {
    if (std::abs(mu_scale) * (1.0 + gamma) >= 1.0)
        throw config_error("bundled structure needs |mu_scale| (1+gamma) < 1");
    Mat2 E1, E2;
    E1 << 1.0, 0.2, -0.1, 0.4;
    E2 << 0.3, -1.0, 0.7, 0.1;
    auto gen = [mu_scale, nu_scale, E1, E2](cd z, cd w) {
        cd mu = mu_scale * w;
        cd nu = nu_scale * w * (1.0 + 0.3 * z);
        Mat2 Ah = beltrami_hat(mu);
        Mat2 I2 = Mat2::Identity();
        Mat2 J2 = j_standard_2();
        Mat2 J11 = J2 * (I2 - Ah) * (I2 - Ah) / (1.0 - std::norm(mu));
        Mat2 Y = nu.real() * E1 + nu.imag() * E2;
        Mat2 J21 = J2 * Y - Y * J11;
        Mat4 J = Mat4::Zero();
        J.block<2, 2>(0, 0) = J11;
        J.block<2, 2>(2, 0) = J21;
        J.block<2, 2>(2, 2) = J2;
        return J;
    };
    StructureField S(gen, gamma);
    if (S.square_defect() > 1e-12)
        throw construction_error("bundled admissible structure violates J^2 = -I");
    return S;
}

StructureField StructureField::from_generator(std::function<Mat4(cd, cd)> gen, double gamma) {
    StructureField S(std::move(gen), gamma);
    if (S.square_defect() > 1e-10)
        throw construction_error("generator violates J^2 = -I on the sample set");
    return S;
}

double StructureField::square_defect() const {
    double worst = 0.0;
    for (const auto& p : samples_) {
        Mat4 J = gen_(p.z, p.w);
        worst = std::max(worst, (J * J + Mat4::Identity()).cwiseAbs().maxCoeff());
    }
    return worst;
}

Mat2c a_matrix_at(const Mat4& J, double* clin_deviation) {
    Mat4 K = j_standard() + J;
    double det = K.determinant();
    if (std::abs(det) < 1e-12) {
        std::ostringstream msg;
        msg << "J_st + J is singular (|det| = " << std::abs(det) << ")";
        throw degeneracy_error(msg.str());
    }
    Mat4 M = K.inverse() * (j_standard() - J);
    if (clin_deviation) {
        Mat4 D = M * j_standard() + j_standard() * M;
        *clin_deviation = D.cwiseAbs().maxCoeff();
    }
    Mat2c A;
    Vec4 e1(1, 0, 0, 0), e3(0, 0, 1, 0);
    Vec2c c0 = complex_of(Vec4(M * e1));
    Vec2c c1 = complex_of(Vec4(M * e3));
    A.col(0) = c0;
    A.col(1) = c1;
    return A;
}

Mat4 j_from_a(const Mat2c& A) {
    // real operator v -> A conj(v)
    Mat4 Ah;
    for (int col = 0; col < 4; ++col) {
        Vec4 e = Vec4::Zero();
        e[col] = 1.0;
        Vec2c vc = complex_of(e);
        Vec2c im = A * vc.conjugate();
        Ah.col(col) = real_of(im);
    }
    Mat4 I = Mat4::Identity();
    return j_standard() * (I - Ah) * (I + Ah).inverse();
}

AMatrixField matrix_a_from_j(const StructureField& S) {
    AMatrixField out;
    out.samples.reserve(S.samples().size());
    for (const auto& p : S.samples()) {
        double dev = 0.0;
        Mat2c A;
        try {
            A = a_matrix_at(S.eval(p.z, p.w), &dev);
        } catch (const degeneracy_error&) {
            std::ostringstream msg;
            msg << "J_st + J singular at sample z = (" << p.z.real() << "," << p.z.imag()
                << "), w = (" << p.w.real() << "," << p.w.imag() << ")";
            throw degeneracy_error(msg.str());
        }
        out.max_clin_deviation = std::max(out.max_clin_deviation, dev);
        out.max_second_column =
            std::max(out.max_second_column, std::max(std::abs(A(0, 1)), std::abs(A(1, 1))));
        out.samples.push_back({p, A});
    }
    return out;
}

BlockReport verify_block_structure(const StructureField& S) {
    BlockReport rep;
    Mat2 J2 = j_standard_2();
    for (const auto& p : S.samples()) {
        Mat4 J = S.eval(p.z, p.w);
        rep.dev_j12 = std::max(rep.dev_j12, J.block<2, 2>(0, 2).cwiseAbs().maxCoeff());
        rep.dev_j22 = std::max(rep.dev_j22, (J.block<2, 2>(2, 2) - J2).cwiseAbs().maxCoeff());
        if (std::abs(p.w) == 0.0) {
            rep.dev_j11_w0 =
                std::max(rep.dev_j11_w0, (J.block<2, 2>(0, 0) - J2).cwiseAbs().maxCoeff());
            rep.dev_j21_w0 =
                std::max(rep.dev_j21_w0, J.block<2, 2>(2, 0).cwiseAbs().maxCoeff());
        }
    }
    rep.pass = rep.dev_j12 <= 1e-8 && rep.dev_j22 <= 1e-8 && rep.dev_j11_w0 <= 1e-8 &&
               rep.dev_j21_w0 <= 1e-8;
    double worst = rep.dev_j12;
    rep.worst_block = "J12";
    if (rep.dev_j22 > worst) {
        worst = rep.dev_j22;
        rep.worst_block = "J22";
    }
    if (rep.dev_j11_w0 > worst) {
        worst = rep.dev_j11_w0;
        rep.worst_block = "J11(z,0)";
    }
    if (rep.dev_j21_w0 > worst) {
        worst = rep.dev_j21_w0;
        rep.worst_block = "J21(z,0)";
    }
    return rep;
}

double nondegeneracy_check(const StructureField& S) {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& p : S.samples()) {
        Mat4 K = j_standard() + S.eval(p.z, p.w);
        mn = std::min(mn, std::abs(K.determinant()));
    }
    return mn;
}

CoefficientPair coefficients_from_structure(const StructureField& S, double gamma,
                                            const FitOptions& opts) {
    BlockReport blocks = verify_block_structure(S);
    if (!blocks.pass)
        throw usage_error("structure is not admissible: block condition " + blocks.worst_block +
                          " fails");
    if (opts.z_angles <= 2 * opts.z_degree || opts.w_angles <= 2 * opts.w_degree)
        throw config_error("fit sampling is too coarse for the requested degrees");

    // dense fit sample set (finer than the certification samples)
    std::vector<BidiscPoint> pts;
    for (int zr = 0; zr <= opts.z_radii; ++zr) {
        double r1 = double(zr) / opts.z_radii;
        int za = zr == 0 ? 1 : opts.z_angles;
        for (int a = 0; a < za; ++a) {
            double t1 = kTau * a / opts.z_angles;
            cd z(r1 * std::cos(t1), r1 * std::sin(t1));
            for (int wr = 0; wr <= opts.w_radii; ++wr) {
                double r2 = (1.0 + gamma) * double(wr) / opts.w_radii;
                int wa = wr == 0 ? 1 : opts.w_angles;
                for (int b = 0; b < wa; ++b) {
                    double t2 = kTau * b / opts.w_angles + 0.37; // avoid axis-only sampling
                    pts.push_back({z, cd(r2 * std::cos(t2), r2 * std::sin(t2))});
                }
            }
        }
    }

    std::vector<std::array<int, 4>> basis;
    for (int i = 0; i <= opts.z_degree; ++i)
        for (int j = 0; i + j <= opts.z_degree; ++j)
            for (int k = 0; k <= opts.w_degree; ++k)
                for (int l = 0; k + l <= opts.w_degree; ++l) {
                    if (k + l < 1) continue;
                    basis.push_back({i, j, k, l});
                }

    Eigen::MatrixXcd V(pts.size(), basis.size());
    Eigen::VectorXcd rhs_a(pts.size()), rhs_b(pts.size());
    double sup_a_data = 0.0;
    for (size_t r = 0; r < pts.size(); ++r) {
        Mat2c A = a_matrix_at(S.eval(pts[r].z, pts[r].w));
        rhs_a[r] = A(0, 0);
        rhs_b[r] = A(1, 0);
        sup_a_data = std::max(sup_a_data, std::abs(A(0, 0)));
        for (size_t c = 0; c < basis.size(); ++c) {
            auto [i, j, k, l] = basis[c];
            V(r, c) = ipow(pts[r].z, i) * ipow(std::conj(pts[r].z), j) * ipow(pts[r].w, k) *
                      ipow(std::conj(pts[r].w), l);
        }
    }
    if (sup_a_data >= 1.0)
        throw ellipticity_error("extracted coefficient a reaches modulus 1 on the sample set");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(V);
    Eigen::VectorXcd ca = qr.solve(rhs_a);
    Eigen::VectorXcd cb = qr.solve(rhs_b);
    double res_a = (V * ca - rhs_a).cwiseAbs().maxCoeff();
    double res_b = (V * cb - rhs_b).cwiseAbs().maxCoeff();
    double res = std::max(res_a, res_b);
    if (res > opts.tolerance)
        throw approximation_error("coefficient fit residual above tolerance", res);

    std::vector<MonomialTerm> a_terms, b_terms;
    for (size_t c = 0; c < basis.size(); ++c) {
        auto [i, j, k, l] = basis[c];
        if (std::abs(ca[c]) > opts.drop_below) a_terms.push_back({ca[c], i, j, k, l});
        if (std::abs(cb[c]) > opts.drop_below) b_terms.push_back({cb[c], i, j, k, l});
    }
    return CoefficientPair(std::move(a_terms), std::move(b_terms), gamma);
}

namespace {

BidiscPoint shift(const BidiscPoint& p, const Vec4& d) {
    return {p.z + cd(d[0], d[1]), p.w + cd(d[2], d[3])};
}

double levi_once(const ScalarFn& u, const StructureFn& J, const BidiscPoint& p, const Vec4& v,
                 double h) {
    auto eval_u = [&](const Vec4& d) { BidiscPoint q = shift(p, d); return u(q.z, q.w); };

    // gradient and Hessian of u at p, central differences
    Vec4 grad;
    Mat4 H;
    double u0 = eval_u(Vec4::Zero());
    for (int a = 0; a < 4; ++a) {
        Vec4 ea = Vec4::Zero();
        ea[a] = h;
        double up = eval_u(ea), um = eval_u(-ea);
        grad[a] = (up - um) / (2.0 * h);
        H(a, a) = (up - 2.0 * u0 + um) / (h * h);
    }
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            Vec4 e = Vec4::Zero();
            e[a] = h;
            e[b] = h;
            Vec4 f = Vec4::Zero();
            f[a] = h;
            f[b] = -h;
            double val =
                (eval_u(e) - eval_u(f) - eval_u(-f) + eval_u(-e)) / (4.0 * h * h);
            H(a, b) = H(b, a) = val;
        }

    Mat4 J0 = J(p.z, p.w);
    Vec4 w = J0 * v;
    auto dJ = [&](const Vec4& dir) {
        BidiscPoint qp = shift(p, Vec4(h * dir)), qm = shift(p, Vec4(-h * dir));
        return Mat4((J(qp.z, qp.w) - J(qm.z, qm.w)) / (2.0 * h));
    };
    Mat4 dJv = dJ(v), dJw = dJ(w);
    // d(J* du)(v, w) with constant extensions of v and w
    double t1 = v.dot(H * (J0 * w)) + grad.dot(dJv * w);
    double t2 = w.dot(H * (J0 * v)) + grad.dot(dJw * v);
    return -(t1 - t2);
}

} // namespace

LeviSample levi_form(const ScalarFn& u, const StructureFn& J, const BidiscPoint& p,
                     const Vec4& v, double h) {
    double Lh = levi_once(u, J, p, v, h);
    double Lh2 = levi_once(u, J, p, v, 0.5 * h);
    LeviSample out;
    out.value = (4.0 * Lh2 - Lh) / 3.0;
    out.richardson_gap = std::abs(Lh - Lh2);
    out.reliable = out.richardson_gap <= 1e-3 * std::max(1.0, std::abs(Lh2));
    return out;
}

double levi_min_eigenvalue(const ScalarFn& u, const BidiscPoint& p, double h) {
    StructureFn jst = [](cd, cd) { return j_standard(); };
    auto Q = [&](const Vec4& v) { return levi_form(u, jst, p, v, h).value; };
    Vec4 e1(1, 0, 0, 0), e2(0, 0, 1, 0), e12(1, 0, 1, 0), e1i2(1, 0, 0, 1);
    double h11 = Q(e1) / 4.0;
    double h22 = Q(e2) / 4.0;
    double re12 = (Q(e12) / 4.0 - h11 - h22) / 2.0;
    double im12 = (Q(e1i2) / 4.0 - h11 - h22) / 2.0;
    double tr = h11 + h22;
    double det = h11 * h22 - (re12 * re12 + im12 * im12);
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return 4.0 * (tr / 2.0 - disc);
}

BidiscPoint NormalizationMap::apply(const BidiscPoint& p) const {
    cd zc[2] = {p.z, p.w};
    cd out[2];
    for (int i = 0; i < 2; ++i) {
        out[i] = zc[i];
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j) out[i] += a[i][k][j] * zc[k] * std::conj(zc[j]);
    }
    return {out[0], out[1]};
}

BidiscPoint NormalizationMap::invert(const BidiscPoint& q) const {
    BidiscPoint x = q;
    for (int it = 0; it < 25; ++it) {
        BidiscPoint fx = apply(x);
        cd rz = fx.z - q.z, rw = fx.w - q.w;
        if (std::abs(rz) + std::abs(rw) < 1e-15) break;
        Mat4 Jm = jacobian(x);
        Vec4 rhs(rz.real(), rz.imag(), rw.real(), rw.imag());
        Vec4 dx = Jm.partialPivLu().solve(rhs);
        x.z -= cd(dx[0], dx[1]);
        x.w -= cd(dx[2], dx[3]);
    }
    return x;
}

Mat4 NormalizationMap::jacobian(const BidiscPoint& p) const {
    cd zc[2] = {p.z, p.w};
    // Phi_z[i][k] = delta_ik + sum_j a[i][k][j] conj(z_j); Phi_zbar[i][j] = sum_k a[i][k][j] z_k
    Mat2c Pz = Mat2c::Identity(), Pzb = Mat2c::Zero();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j) {
                Pz(i, k) += a[i][k][j] * std::conj(zc[j]);
                Pzb(i, j) += a[i][k][j] * zc[k];
            }
    Mat4 out;
    for (int col = 0; col < 4; ++col) {
        Vec4 e = Vec4::Zero();
        e[col] = 1.0;
        Vec2c vc = complex_of(e);
        Vec2c im = Pz * vc + Pzb * vc.conjugate();
        out.col(col) = real_of(im);
    }
    return out;
}

namespace {

// dA/dz_m at the origin by central differences of the pointwise extraction
void a_z_derivatives(const std::function<Mat2c(BidiscPoint)>& A, double h, Mat2c dAdz[2]) {
    for (int m = 0; m < 2; ++m) {
        Vec4 ex = Vec4::Zero(), ey = Vec4::Zero();
        ex[2 * m] = h;
        ey[2 * m + 1] = h;
        auto at = [&](const Vec4& d) { return A({cd(d[0], d[1]), cd(d[2], d[3])}); };
        Mat2c dx = (at(ex) - at(-ex)) / (2.0 * h);
        Mat2c dy = (at(ey) - at(-ey)) / (2.0 * h);
        dAdz[m] = 0.5 * (dx - cd(0.0, 1.0) * dy);
    }
}

double mat_sup(const Mat2c dA[2]) {
    double s = 0.0;
    for (int m = 0; m < 2; ++m) s = std::max(s, dA[m].cwiseAbs().maxCoeff());
    return s;
}

} // namespace

Mat2c pushed_a(const NormalizationMap& map, const StructureField& S, const BidiscPoint& q) {
    BidiscPoint x = map.invert(q);
    Mat2c A = a_matrix_at(S.eval(x.z, x.w));
    cd zc[2] = {x.z, x.w};
    Mat2c Pz = Mat2c::Identity(), Pzb = Mat2c::Zero();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j) {
                Pz(i, k) += map.a[i][k][j] * std::conj(zc[j]);
                Pzb(i, j) += map.a[i][k][j] * zc[k];
            }
    Mat2c num = Pz * A + Pzb;
    Mat2c den = Pz.conjugate() + Pzb.conjugate() * A;
    return num * den.inverse();
}

NormalizationResult normalize_coordinates(const StructureField& S) {
    Mat2c A0 = a_matrix_at(S.eval(cd(0, 0), cd(0, 0)));
    if (A0.cwiseAbs().maxCoeff() > 1e-8)
        throw usage_error("normalize_coordinates requires A(0) = 0 (centered coordinates)");

    const double h = 1e-5;
    auto raw = [&S](BidiscPoint p) { return a_matrix_at(S.eval(p.z, p.w)); };
    Mat2c before[2];
    a_z_derivatives(raw, h, before);

    NormalizationResult out;
    out.a_z_before = mat_sup(before);
    // first-order expansion of the pushforward gives
    // dA'_{ij}/dz_m (0) = dA_{ij}/dz_m (0) + a[i][m][j]
    for (int i = 0; i < 2; ++i)
        for (int m = 0; m < 2; ++m)
            for (int j = 0; j < 2; ++j) out.map.a[i][m][j] = -before[m](i, j);

    auto pushed = [&](BidiscPoint q) { return pushed_a(out.map, S, q); };
    Mat2c after[2];
    a_z_derivatives(pushed, h, after);
    out.a_z_after = mat_sup(after);
    return out;
}

StructureFn pushforward_structure(const NormalizationMap& map, const StructureField& S) {
    // copy the generator by value so the callable owns everything it needs
    auto eval = [map, S](cd z, cd w) {
        BidiscPoint x = map.invert({z, w});
        Mat4 D = map.jacobian(x);
        return Mat4(D * S.eval(x.z, x.w) * D.inverse());
    };
    return eval;
}

} // namespace jdisc::acs
