#include "jdisc/calculus.hpp"

#include <cmath>

#include "jdisc/errors.hpp"

namespace jdisc {

ModeStack to_modes(const ComplexField& f) {
    const DiscGrid& g = f.grid();
    ModeStack m;
    m.grid = f.grid_ptr();
    m.modes.assign(g.n_angular(), std::vector<cd>(g.n_radial()));
    std::vector<cd> ring(g.n_angular());
    for (int i = 0; i < g.n_radial(); ++i) {
        g.ring_to_modes(&f.values()[g.index(i, 0)], ring.data());
        for (int k = 0; k < g.n_angular(); ++k) m.modes[k][i] = ring[k];
    }
    return m;
}

ComplexField from_modes(const ModeStack& m) {
    const DiscGrid& g = *m.grid;
    ComplexField out(m.grid);
    std::vector<cd> slot(g.n_angular()), ring(g.n_angular());
    for (int i = 0; i < g.n_radial(); ++i) {
        for (int k = 0; k < g.n_angular(); ++k) slot[k] = m.modes[k][i];
        g.modes_to_ring(slot.data(), &out.values()[g.index(i, 0)]);
    }
    return out;
}

namespace {

// shared core: out-mode n receives (1/2)(p' + sgn * n_in * p / r) from in-mode n_in,
// where sgn = -1 for dbar (n = n_in + 1) and +1 for dz (n = n_in - 1)
ComplexField wirtinger(const ComplexField& f, int shift) {
    const DiscGrid& g = f.grid();
    ModeStack in = to_modes(f);
    ModeStack out;
    out.grid = f.grid_ptr();
    out.modes.assign(g.n_angular(), std::vector<cd>(g.n_radial(), cd(0.0, 0.0)));
    std::vector<cd> dp(g.n_radial());
    for (int k = 0; k < g.n_angular(); ++k) {
        int m_in = g.mode_of_slot(k);
        int slot_out = g.slot_of_mode(m_in + shift);
        if (slot_out < 0) continue;
        g.radial_derivative(in.modes[k].data(), dp.data());
        auto& dst = out.modes[slot_out];
        for (int i = 0; i < g.n_radial(); ++i) {
            double r = g.radius(i);
            dst[i] = 0.5 * (dp[i] - double(shift) * double(m_in) * in.modes[k][i] / r);
        }
    }
    ComplexField res = from_modes(out);
    res.require_finite(shift > 0 ? "dbar" : "dz");
    return res;
}

} // namespace

ComplexField dbar(const ComplexField& f) { return wirtinger(f, +1); }
ComplexField dz(const ComplexField& f) { return wirtinger(f, -1); }

double norm(const ComplexField& f, double p) {
    if (p == kSupNorm) {
        double mx = 0.0;
        for (const cd& z : f.values()) mx = std::max(mx, std::abs(z));
        return mx;
    }
    if (!(p >= 1.0)) throw config_error("norm exponent must satisfy p >= 1");
    const auto& w = f.grid().quad_weights();
    double acc = 0.0;
    if (p == 2.0) {
        for (size_t k = 0; k < w.size(); ++k) acc += w[k] * std::norm(f[static_cast<int>(k)]);
    } else {
        for (size_t k = 0; k < w.size(); ++k)
            acc += w[k] * std::pow(std::abs(f[static_cast<int>(k)]), p);
    }
    return std::pow(acc, 1.0 / p);
}

cd inner(const ComplexField& f, const ComplexField& g) {
    f.require_same_grid(g);
    const auto& w = f.grid().quad_weights();
    cd acc(0.0, 0.0);
    for (size_t k = 0; k < w.size(); ++k)
        acc += w[k] * f[static_cast<int>(k)] * std::conj(g[static_cast<int>(k)]);
    return acc;
}

} // namespace jdisc
