#include "jdisc/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "jdisc/errors.hpp"

namespace jdisc {

namespace {

// Mode-wise Cauchy-Green core. For input mode m with radial profile f_m, the
// output lands in mode n = m-1 with
//   m >= 1:  u_n(r) = -2 int_r^1 f_m(rho) (r/rho)^{m-1} drho
//   m <= 0:  u_n(r) = +2 int_0^r f_m(rho) (rho/r)^{1-m} drho
// When refl != nullptr, the full-disc moments c_m = int_0^1 f_m rho^{1-m} drho
// (m <= 0) are stored per input slot for the exterior reflection of t0.
void cauchy_modes(const ModeStack& in, ModeStack& out, std::vector<cd>* refl) {
    const DiscGrid& g = *in.grid;
    int nr = g.n_radial();
    int na = g.n_angular();
    out.grid = in.grid;
    out.modes.assign(na, std::vector<cd>(nr, cd(0.0, 0.0)));
    if (refl) refl->assign(na, cd(0.0, 0.0));
    std::vector<cd> acc(nr);
    for (int k = 0; k < na; ++k) {
        int m = g.mode_of_slot(k);
        const auto& fm = in.modes[k];
        bool zero = true;
        for (const cd& z : fm)
            if (z != cd(0.0, 0.0)) {
                zero = false;
                break;
            }
        if (zero) continue;
        int slot_out = g.slot_of_mode(m - 1);
        if (m >= 1) {
            const auto& tbl = g.volterra_out(m - 1);
            if (slot_out < 0) continue;
            auto& dst = out.modes[slot_out];
            for (int i = 0; i < nr; ++i) {
                const double* row = &tbl[static_cast<size_t>(i) * nr];
                cd s(0.0, 0.0);
                for (int j = 0; j < nr; ++j) s += row[j] * fm[j];
                dst[i] -= 2.0 * s;
            }
        } else {
            const auto& tbl = g.volterra_in(1 - m);
            for (int i = 0; i < nr; ++i) {
                const double* row = &tbl[static_cast<size_t>(i) * nr];
                cd s(0.0, 0.0);
                for (int j = 0; j < nr; ++j) s += row[j] * fm[j];
                acc[i] = 2.0 * s;
            }
            if (slot_out >= 0) {
                auto& dst = out.modes[slot_out];
                for (int i = 0; i < nr; ++i) dst[i] += acc[i];
            }
            if (refl) (*refl)[k] = 0.5 * acc[nr - 1]; // c_m = (1/2) u_{m-1}(1)
        }
    }
}

} // namespace

ComplexField cauchy_green(const ComplexField& f) {
    ModeStack in = to_modes(f);
    ModeStack out;
    cauchy_modes(in, out, nullptr);
    ComplexField res = from_modes(out);
    res.require_finite("cauchy_green");
    return res;
}

ComplexField ahlfors_beurling(const ComplexField& f) { return dz(cauchy_green(f)); }

ComplexField bergman(const ComplexField& f) {
    const DiscGrid& g = f.grid();
    int nr = g.n_radial(), na = g.n_angular();
    ModeStack in = to_modes(f);
    ModeStack out;
    out.grid = f.grid_ptr();
    out.modes.assign(na, std::vector<cd>(nr, cd(0.0, 0.0)));
    const size_t brow = static_cast<size_t>(nr - 1) * nr;
    for (int k = 0; k < na; ++k) {
        int m = g.mode_of_slot(k);
        if (m < 0) continue;
        const auto& fm = in.modes[k];
        bool zero = true;
        for (const cd& z : fm)
            if (z != cd(0.0, 0.0)) {
                zero = false;
                break;
            }
        if (zero) continue;
        const auto& tbl = g.volterra_in(m + 1);
        cd beta(0.0, 0.0);
        for (int j = 0; j < nr; ++j) beta += tbl[brow + j] * fm[j];
        cd scale = -2.0 * double(m + 1) * beta;
        auto& dst = out.modes[k];
        for (int i = 0; i < nr; ++i) dst[i] = scale * std::pow(g.radius(i), m);
    }
    ComplexField res = from_modes(out);
    res.require_finite("bergman");
    return res;
}

ComplexField t0(const ComplexField& f) {
    const DiscGrid& g = f.grid();
    int nr = g.n_radial(), na = g.n_angular();
    ModeStack in = to_modes(f);
    ModeStack out;
    std::vector<cd> refl;
    cauchy_modes(in, out, &refl);
    // subtract the reflected exterior part: mode m <= 0 contributes
    // -2 conj(c_m) r^{1-m} in output mode 1-m
    for (int k = 0; k < na; ++k) {
        int m = g.mode_of_slot(k);
        if (m > 0 || refl[k] == cd(0.0, 0.0)) continue;
        int slot = g.slot_of_mode(1 - m);
        if (slot < 0) continue;
        cd c = -2.0 * std::conj(refl[k]);
        auto& dst = out.modes[slot];
        for (int i = 0; i < nr; ++i) dst[i] += c * std::pow(g.radius(i), 1 - m);
    }
    ComplexField res = from_modes(out);
    res.require_finite("t0");
    return res;
}

ComplexField r0(const ComplexField& f) {
    ComplexField res = ahlfors_beurling(f) + bergman(conj(f));
    res.require_finite("r0");
    return res;
}

const char* operator_name(OperatorId id) {
    switch (id) {
        case OperatorId::T: return "T";
        case OperatorId::R: return "R";
        case OperatorId::B: return "B";
        case OperatorId::T0: return "T0";
        case OperatorId::R0: return "R0";
    }
    return "?";
}

ComplexField apply_operator(OperatorId id, const ComplexField& f) {
    switch (id) {
        case OperatorId::T: return cauchy_green(f);
        case OperatorId::R: return ahlfors_beurling(f);
        case OperatorId::B: return bergman(f);
        case OperatorId::T0: return t0(f);
        case OperatorId::R0: return r0(f);
    }
    throw usage_error("unknown operator id");
}

ComplexField random_band_limited(std::shared_ptr<const DiscGrid> grid, rng& gen,
                                 int max_mode, int max_radial) {
    const DiscGrid& g = *grid;
    int nr = g.n_radial(), na = g.n_angular();
    int mb = std::min(max_mode, na / 4);
    ModeStack stack;
    stack.grid = grid;
    stack.modes.assign(na, std::vector<cd>(nr, cd(0.0, 0.0)));
    for (int m = -mb; m <= mb; ++m) {
        int slot = g.slot_of_mode(m);
        if (slot < 0) continue;
        for (int t = 0; t <= max_radial; ++t) {
            cd c = gen.normal_complex() / (1.0 + std::abs(m) + t);
            int pw = std::abs(m) + 2 * t;
            auto& dst = stack.modes[slot];
            for (int i = 0; i < nr; ++i) dst[i] += c * std::pow(g.radius(i), pw);
        }
    }
    return from_modes(stack);
}

OperatorNormProfile estimate_norm(OperatorId id, double p, int trials, std::uint64_t seed,
                                  std::shared_ptr<const DiscGrid> grid) {
    if (!(p > 1.0)) throw config_error("operator norm exponent must satisfy p > 1");
    if (trials < 1) throw config_error("estimate_norm needs trials >= 1");
    OperatorNormProfile prof;
    prof.operator_id = id;
    prof.p = p;
    prof.trials = trials;
    if (p > 2.0) prof.alpha = (p - 2.0) / p;
    rng gen(seed);
    for (int t = 0; t < trials; ++t) {
        ComplexField f = random_band_limited(grid, gen);
        double nf = norm(f, p);
        if (nf < 1e-14) continue;
        double ratio = norm(apply_operator(id, f), p) / nf;
        if (ratio > prof.estimate) {
            prof.estimate = ratio;
            prof.best_trial = t;
        }
    }
    return prof;
}

} // namespace jdisc
