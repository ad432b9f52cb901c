#include "jdisc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jdisc/calculus.hpp"
#include "jdisc/errors.hpp"
#include "jdisc/transforms.hpp"

namespace jdisc {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

// Smooth radial clamp of |w| onto [0, 1+gamma]: identity up to 1 + 0.8 gamma,
// then |w| -> t0 + dl * tanh((|w|-t0)/dl) which saturates strictly below 1+gamma.
double clamp_factor(double t, double gamma) {
    double t0 = 1.0 + 0.8 * gamma;
    if (t <= t0) return 1.0;
    double dl = 0.2 * gamma;
    return (t0 + dl * std::tanh((t - t0) / dl)) / t;
}

enum class CoefKind { A, B };

// Multiplier fields of the integral system. For kind A this is
//   a(zeta e^u, zeta^n e^v) zeta^{-1} e^{conj u - u},
// for kind B
//   b(zeta e^u, zeta^n e^v) zeta^{-n} e^{conj u - v}.
// Each monomial's zeta powers are combined analytically: the structural
// k + l >= 1 keeps every net radial exponent nonnegative, so nothing is ever
// divided by zeta at a node. The w arguments are clamped to |w| < 1 + gamma
// before entering the monomials.
ComplexField coefficient_field(CoefKind kind, const ComplexField& u, const ComplexField& v,
                               const CoefficientPair& coeffs, int n) {
    const DiscGrid& g = u.grid();
    ComplexField out(u.grid_ptr());
    const auto& terms = kind == CoefKind::A ? coeffs.a_terms() : coeffs.b_terms();
    if (terms.empty()) return out;
    for (int i = 0; i < g.n_radial(); ++i) {
        double r = g.radius(i);
        double rn = std::pow(r, n);
        for (int j = 0; j < g.n_angular(); ++j) {
            double th = g.theta(j);
            cd uv = u(i, j), vv = v(i, j);
            double wabs = rn * std::exp(vv.real());
            double sigma = clamp_factor(wabs, coeffs.gamma());
            cd acc(0.0, 0.0);
            for (const auto& t : terms) {
                int er, et;
                cd ex;
                if (kind == CoefKind::A) {
                    er = t.i + t.j + n * (t.k + t.l) - 1;
                    et = t.i - t.j + n * (t.k - t.l) - 1;
                    ex = double(t.i - 1) * uv + double(t.j + 1) * std::conj(uv) +
                         double(t.k) * vv + double(t.l) * std::conj(vv);
                } else {
                    er = t.i + t.j + n * (t.k + t.l) - n;
                    et = t.i - t.j + n * (t.k - t.l) - n;
                    ex = double(t.i) * uv + double(t.j + 1) * std::conj(uv) +
                         double(t.k - 1) * vv + double(t.l) * std::conj(vv);
                }
                double mag = std::pow(r, er) * std::pow(sigma, t.k + t.l);
                double ang = th * et;
                acc += t.c * mag * cd(std::cos(ang), std::sin(ang)) * std::exp(ex);
            }
            out(i, j) = acc;
        }
    }
    out.require_finite(kind == CoefKind::A ? "A multiplier" : "B multiplier");
    return out;
}

double sup_abs(const ComplexField& f) {
    double m = 0.0;
    for (const cd& z : f.values()) m = std::max(m, std::abs(z));
    return m;
}

} // namespace

void SolverConfig::validate() const {
    if (!(p > 2.0)) throw config_error("working exponent must satisfy p > 2");
    if (n < 1) throw config_error("vanishing order n must be >= 1");
    if (!(tol_h > 0.0) || !(tol_outer > 0.0)) throw config_error("tolerances must be positive");
    if (max_inner < 1 || max_outer < 1) throw config_error("iteration caps must be >= 1");
    if (!(damping > 0.0) || damping > 1.0) throw config_error("damping must lie in (0, 1]");
    if (!(safety >= 1.0)) throw config_error("safety factor must be >= 1");
}

double select_exponent(const CoefficientPair& coeffs, const std::vector<double>& candidates,
                       std::shared_ptr<const DiscGrid> grid, int trials, std::uint64_t seed,
                       double safety) {
    if (candidates.empty()) throw config_error("exponent candidate list is empty");
    for (double p : candidates)
        if (!(p > 2.0)) throw config_error("exponent candidates must all exceed 2");
    std::vector<double> sorted = candidates;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> failing;
    for (double p : sorted) {
        double est = estimate_norm(OperatorId::R0, p, trials, seed, grid).estimate;
        double product = coeffs.a0() * safety * est;
        if (product < 1.0) return p;
        failing.emplace_back(p, product);
    }
    std::ostringstream msg;
    msg << "no exponent candidate satisfies a0 * safety * ||R0||_p < 1;";
    for (auto& [p, prod] : failing) msg << " p=" << p << " -> " << prod;
    throw infeasibility_error(msg.str(), std::move(failing));
}

InnerSolve solve_h(const ComplexField& u, const ComplexField& v, const CoefficientPair& coeffs,
                   int n, double p, double tol_h, int max_inner) {
    InnerSolve out;
    ComplexField A = coefficient_field(CoefKind::A, u, v, coeffs, n);
    out.a_norm_p = norm(A, p);
    ComplexField zbar = conj(ComplexField::coordinate(u.grid_ptr()));
    ComplexField one(u.grid_ptr(), cd(1.0, 0.0));
    ComplexField h(u.grid_ptr());
    for (int it = 1; it <= max_inner; ++it) {
        ComplexField h_next = out.a_norm_p == 0.0
                                  ? A
                                  : A * (one + zbar * conj(r0(h)));
        double d = norm(h_next - h, p);
        out.deltas.push_back(d);
        h = std::move(h_next);
        out.iters = it;
        if (d < tol_h) {
            out.h = std::move(h);
            // geometric-mean contraction rate over the recorded distances
            size_t m = out.deltas.size();
            while (m > 1 && out.deltas[m - 1] < 1e-14) --m;
            if (m >= 2 && out.deltas[0] > 0.0)
                out.rate = std::pow(out.deltas[m - 1] / out.deltas[0], 1.0 / double(m - 1));
            return out;
        }
    }
    double last_ratio = out.deltas.size() >= 2
                            ? out.deltas.back() / out.deltas[out.deltas.size() - 2]
                            : 0.0;
    throw convergence_error("inner fixed point for h did not reach tol within max_inner",
                            last_ratio, max_inner);
}

namespace {

DiscSolution assemble(const ComplexField& u, const ComplexField& v, const ComplexField& h,
                      int n) {
    const DiscGrid& g = u.grid();
    DiscSolution sol;
    sol.u = u;
    sol.v = v;
    sol.h = h;
    sol.n = n;
    sol.z = ComplexField(u.grid_ptr());
    sol.w = ComplexField(u.grid_ptr());
    for (int i = 0; i < g.n_radial(); ++i) {
        double r = g.radius(i);
        double rn = std::pow(r, n);
        for (int j = 0; j < g.n_angular(); ++j) {
            double th = g.theta(j);
            sol.z(i, j) = cd(r * std::cos(th), r * std::sin(th)) * std::exp(u(i, j));
            cd ph = v(i, j) + cd(0.0, n * th);
            sol.w(i, j) = rn * std::exp(ph);
        }
    }
    sol.z.require_finite("z");
    sol.w.require_finite("w");
    return sol;
}

} // namespace

std::pair<DiscSolution, SolveReport> outer_iterate(const CoefficientPair& coeffs,
                                                   const SolverConfig& config) {
    config.validate();
    auto grid = build_grid(config.n_radial, config.n_angular, config.rule);
    SolveReport rep;
    rep.p = config.p;
    rep.n = config.n;
    rep.a0 = coeffs.a0();
    rep.delta = std::pow(double(config.n), -1.0 / config.p);
    rep.r0_norm_estimate =
        estimate_norm(OperatorId::R0, config.p, config.norm_trials, config.seed, grid).estimate;
    double product = coeffs.a0() * config.safety * rep.r0_norm_estimate;
    if (product >= 1.0)
        throw infeasibility_error("contraction condition a0 * safety * ||R0||_p < 1 fails",
                                  {{config.p, product}});

    ComplexField u(grid), v(grid);
    ComplexField one(grid, cd(1.0, 0.0));
    ComplexField zbar = conj(ComplexField::coordinate(grid));
    ComplexField h(grid);

    bool converged = false;
    for (int t = 1; t <= config.max_outer; ++t) {
        InnerSolve inner = solve_h(u, v, coeffs, config.n, config.p, config.tol_h,
                                   config.max_inner);
        rep.inner_iters_total += inner.iters;
        rep.contraction_ratio = std::max(rep.contraction_ratio, inner.rate);
        h = inner.h;

        ComplexField U = t0(h);
        ComplexField term = one + zbar * conj(r0(h));
        ComplexField Bc = coefficient_field(CoefKind::B, u, v, coeffs, config.n);
        ComplexField V = t0(Bc * term);

        double res = std::max(sup_abs(U - u), sup_abs(V - v));
        u += cd(config.damping, 0.0) * (U - u);
        v += cd(config.damping, 0.0) * (V - v);
        rep.outer_iters = t;
        rep.history_u_sup.push_back(sup_abs(u));
        rep.history_v_sup.push_back(sup_abs(v));
        rep.history_h_p.push_back(norm(h, config.p));
        if (res < config.tol_outer) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "outer iteration did not converge in " << config.max_outer
            << " steps; last sup norms u=" << rep.history_u_sup.back()
            << " v=" << rep.history_v_sup.back();
        throw convergence_error(msg.str(),
                                rep.history_h_p.empty() ? 0.0 : rep.history_h_p.back(),
                                config.max_outer);
    }
    rep.converged = true;

    // re-solve h at the final (u, v) so the stored provenance is consistent
    InnerSolve finals = solve_h(u, v, coeffs, config.n, config.p, config.tol_h,
                                config.max_inner);
    h = finals.h;
    rep.h_norm = norm(h, config.p);
    rep.h_bound =
        finals.a_norm_p / (1.0 - coeffs.a0() * config.safety * rep.r0_norm_estimate);

    DiscSolution sol = assemble(u, v, h, config.n);
    rep.residuals = residual(sol, coeffs);
    rep.winding_z = winding_number(boundary_trace(sol.z));
    JacobianCheck jc = jacobian_check(sol);
    rep.min_jacobian = jc.min_jacobian;
    rep.orientation_ok = jc.orientation_ok;
    rep.envelope_C = envelope_constant(sol);
    double sw = 0.0;
    for (const cd& z : sol.w.values()) sw = std::max(sw, std::abs(z));
    rep.sup_w = sw;
    return {std::move(sol), std::move(rep)};
}

ResidualRecord residual(const DiscSolution& sol, const CoefficientPair& coeffs) {
    const DiscGrid& g = sol.z.grid();
    ResidualRecord rec;
    ComplexField dbz = dbar(sol.z), dzz = dz(sol.z), dbw = dbar(sol.w);
    for (int i = 0; i + 1 < g.n_radial(); ++i)
        for (int j = 0; j < g.n_angular(); ++j) {
            cd zv = sol.z(i, j), wv = sol.w(i, j);
            cd cz = std::conj(dzz(i, j));
            rec.pde_z = std::max(rec.pde_z, std::abs(dbz(i, j) - coeffs.eval_a(zv, wv) * cz));
            rec.pde_w = std::max(rec.pde_w, std::abs(dbw(i, j) - coeffs.eval_b(zv, wv) * cz));
        }
    int last = g.n_radial() - 1;
    for (int j = 0; j < g.n_angular(); ++j) {
        rec.boundary_z = std::max(rec.boundary_z, std::abs(std::abs(sol.z(last, j)) - 1.0));
        rec.boundary_w = std::max(rec.boundary_w, std::abs(std::abs(sol.w(last, j)) - 1.0));
    }
    return rec;
}

int winding_number(const BoundaryTrace& tr) {
    if (tr.values.empty()) throw usage_error("empty boundary trace");
    for (const cd& z : tr.values)
        if (std::abs(z) <= 1e-12)
            throw degeneracy_error("boundary trace passes through zero: winding undefined");
    double total = 0.0;
    size_t n = tr.values.size();
    for (size_t j = 0; j < n; ++j)
        total += std::arg(tr.values[(j + 1) % n] / tr.values[j]);
    return static_cast<int>(std::lround(total / kTau));
}

JacobianCheck jacobian_check(const DiscSolution& sol) {
    ComplexField zd = dz(sol.z), zb = dbar(sol.z);
    JacobianCheck out;
    out.min_jacobian = std::numeric_limits<double>::infinity();
    for (int k = 0; k < sol.z.size(); ++k)
        out.min_jacobian = std::min(out.min_jacobian, std::norm(zd[k]) - std::norm(zb[k]));
    out.orientation_ok = out.min_jacobian > 0.0;
    return out;
}

double envelope_constant(const DiscSolution& sol) {
    double m = 0.0;
    for (const cd& z : sol.v.values()) m = std::max(m, z.real());
    return std::exp(m);
}

double torus_distance(const DiscSolution& sol) {
    const DiscGrid& g = sol.z.grid();
    int last = g.n_radial() - 1;
    double d = 0.0;
    for (int j = 0; j < g.n_angular(); ++j) {
        d = std::max(d, std::abs(std::abs(sol.z(last, j)) - 1.0));
        d = std::max(d, std::abs(std::abs(sol.w(last, j)) - 1.0));
    }
    return d;
}

} // namespace jdisc
