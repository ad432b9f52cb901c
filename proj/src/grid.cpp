#include "jdisc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jdisc/errors.hpp"

namespace jdisc {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// Legendre P_n(x) and derivative via the standard three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    double denom = 1.0 - x * x;
    if (std::abs(denom) < 1e-14)
        dp = 0.5 * n * (n + 1.0) * (x > 0 ? 1.0 : std::pow(-1.0, n + 1));
    else
        dp = n * (p0 - x * p1) / denom;
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton from Chebyshev guesses.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p, dp;
            legendre(n, xi, p, dp);
            double dx = -p / dp;
            xi += dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p, dp;
        legendre(n, xi, p, dp);
        x[n - 1 - i] = xi;
        w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    std::sort(x.begin(), x.end());
}

// Gauss-Radau on [-1,1] with the fixed node at +1.
// Interior nodes are the roots of P_{n-1}(x) - P_n(x) in (-1,1);
// w(+1) = 2/n^2, interior w_i = (1+x_i) / (n^2 P_{n-1}(x_i)^2).
void gauss_radau_right(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw config_error("radau rule needs n >= 1");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    if (n == 1) {
        x[0] = 1.0;
        w[0] = 2.0;
        return;
    }
    auto g = [n](double t) {
        double pa, dpa, pb, dpb;
        legendre(n - 1, t, pa, dpa);
        legendre(n, t, pb, dpb);
        return std::pair<double, double>(pa - pb, dpa - dpb);
    };
    // bracket the n-1 interior roots on a fine scan, then bisect + Newton
    int scan = 16 * n;
    std::vector<double> roots;
    double prev_t = -1.0, prev_v = g(-1.0).first;
    for (int s = 1; s <= scan; ++s) {
        double t = -1.0 + (2.0 - 1e-9) * s / scan;
        double v = g(t).first;
        if (prev_v == 0.0) roots.push_back(prev_t);
        else if (prev_v * v < 0.0) {
            double lo = prev_t, hi = t, flo = prev_v;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = g(mid).first;
                if (flo * fm <= 0.0) hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
            }
            double xr = 0.5 * (lo + hi);
            for (int it = 0; it < 8; ++it) {
                auto [f, df] = g(xr);
                if (df == 0.0) break;
                double dx = -f / df;
                xr += dx;
                if (std::abs(dx) < 1e-16) break;
            }
            roots.push_back(xr);
        }
        prev_t = t;
        prev_v = v;
    }
    if (static_cast<int>(roots.size()) != n - 1)
        throw construction_error("radau root bracketing failed");
    std::sort(roots.begin(), roots.end());
    for (int i = 0; i < n - 1; ++i) {
        double p, dp;
        legendre(n - 1, roots[i], p, dp);
        x[i] = roots[i];
        w[i] = (1.0 + roots[i]) / (double(n) * n * p * p);
    }
    x[n - 1] = 1.0;
    w[n - 1] = 2.0 / (double(n) * n);
}

std::vector<double> barycentric_weights(const double* nodes, int n) {
    // log-scaled product formula; only ratios of the weights matter
    std::vector<double> logw(n, 0.0);
    std::vector<double> sign(n, 1.0);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            double d = nodes[j] - nodes[k];
            logw[j] -= std::log(std::abs(d));
            if (d < 0) sign[j] = -sign[j];
        }
    }
    double mx = *std::max_element(logw.begin(), logw.end());
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = sign[j] * std::exp(logw[j] - mx);
    return w;
}

} // namespace

cd DiscGrid::node(int i, int j) const {
    double t = theta(j);
    return cd(r_[i] * std::cos(t), r_[i] * std::sin(t));
}

void DiscGrid::build_radial(int n, RadialRule rule) {
    r_.clear();
    wr_.clear();
    panels_.clear();
    auto append_panel = [&](double a, double b, const std::vector<double>& x,
                            const std::vector<double>& w) {
        Panel p;
        p.start = static_cast<int>(r_.size());
        p.count = static_cast<int>(x.size());
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (size_t k = 0; k < x.size(); ++k) {
            r_.push_back(mid + half * x[k]);
            wr_.push_back(half * w[k]);
        }
        if (std::abs(r_.back() - b) < 1e-12) r_.back() = b;
        panels_.push_back(std::move(p));
    };

    if (rule == RadialRule::composite_gl8 && n >= 16 && n % 8 == 0) {
        int np = n / 8;
        std::vector<double> xg, wg, xr, wr;
        gauss_legendre(8, xg, wg);
        gauss_radau_right(8, xr, wr);
        for (int p = 0; p < np; ++p) {
            double a = double(p) / np, b = double(p + 1) / np;
            if (p == np - 1) append_panel(a, b, xr, wr);
            else append_panel(a, b, xg, wg);
        }
    } else {
        std::vector<double> x, w;
        gauss_radau_right(n, x, w);
        append_panel(0.0, 1.0, x, w);
    }
    r_.back() = 1.0;
    for (auto& p : panels_) p.bary = barycentric_weights(&r_[p.start], p.count);
}

void DiscGrid::build_angular() {
    pow2_ = (n_angular_ & (n_angular_ - 1)) == 0;
    if (!pow2_) {
        twiddle_.resize(static_cast<size_t>(n_angular_) * n_angular_);
        for (int j = 0; j < n_angular_; ++j)
            for (int k = 0; k < n_angular_; ++k) {
                double a = -2.0 * kPi * double(j) * double(k) / n_angular_;
                twiddle_[static_cast<size_t>(j) * n_angular_ + k] = cd(std::cos(a), std::sin(a));
            }
    }
}

void DiscGrid::build_derivative() {
    int n = n_radial_;
    deriv_.assign(static_cast<size_t>(n) * n, 0.0);
    for (const auto& p : panels_) {
        for (int a = 0; a < p.count; ++a) {
            int i = p.start + a;
            double sum = 0.0;
            for (int b = 0; b < p.count; ++b) {
                if (a == b) continue;
                int j = p.start + b;
                double d = (p.bary[b] / p.bary[a]) / (r_[i] - r_[j]);
                deriv_[static_cast<size_t>(i) * n + j] = d;
                sum += d;
            }
            deriv_[static_cast<size_t>(i) * n + i] = -sum;
        }
    }
}

namespace {
// iterative radix-2 FFT, in place; sign = -1 forward
void fft_pow2(std::vector<cd>& a, int sign) {
    int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * kPi / len;
        cd wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                cd u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}
} // namespace

void DiscGrid::ring_to_modes(const cd* ring, cd* modes) const {
    int n = n_angular_;
    if (pow2_) {
        std::vector<cd> buf(ring, ring + n);
        fft_pow2(buf, -1);
        for (int k = 0; k < n; ++k) modes[k] = buf[k] / double(n);
    } else {
        for (int k = 0; k < n; ++k) {
            cd acc(0.0, 0.0);
            for (int j = 0; j < n; ++j)
                acc += ring[j] * twiddle_[static_cast<size_t>(k) * n + j];
            modes[k] = acc / double(n);
        }
    }
}

void DiscGrid::modes_to_ring(const cd* modes, cd* ring) const {
    int n = n_angular_;
    if (pow2_) {
        std::vector<cd> buf(modes, modes + n);
        fft_pow2(buf, +1);
        for (int j = 0; j < n; ++j) ring[j] = buf[j];
    } else {
        for (int j = 0; j < n; ++j) {
            cd acc(0.0, 0.0);
            for (int k = 0; k < n; ++k)
                acc += modes[k] * std::conj(twiddle_[static_cast<size_t>(j) * n + k]);
            ring[j] = acc;
        }
    }
}

void DiscGrid::radial_derivative(const cd* profile, cd* out) const {
    int n = n_radial_;
    for (int i = 0; i < n; ++i) {
        cd acc(0.0, 0.0);
        const double* row = &deriv_[static_cast<size_t>(i) * n];
        for (int j = 0; j < n; ++j) acc += row[j] * profile[j];
        out[i] = acc;
    }
}

const DiscGrid::Panel& DiscGrid::host_panel(double x) const {
    if (panels_.size() == 1) return panels_[0];
    for (const auto& p : panels_)
        if (x <= r_[p.start + p.count - 1] + 1e-15) return p;
    return panels_.back();
}

double DiscGrid::interpolate(const std::vector<double>& profile, double x) const {
    const Panel& p = host_panel(x);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < p.count; ++k) {
        double d = x - r_[p.start + k];
        if (std::abs(d) < 1e-15) return profile[p.start + k];
        double t = p.bary[k] / d;
        num += t * profile[p.start + k];
        den += t;
    }
    return num / den;
}

cd DiscGrid::interpolate(const cd* profile, double x) const {
    const Panel& p = host_panel(x);
    cd num(0.0, 0.0);
    double den = 0.0;
    for (int k = 0; k < p.count; ++k) {
        double d = x - r_[p.start + k];
        if (std::abs(d) < 1e-15) return profile[p.start + k];
        double t = p.bary[k] / d;
        num += t * profile[p.start + k];
        den += t;
    }
    return num / den;
}

// Product quadrature rows for the mode-wise Volterra integrals of the Cauchy-Green
// transform. Integration runs in the log variable rho = r e^{+-s} so the power
// kernel becomes a decaying exponential; panels are graded toward the kernel peak
// and the tail beyond 45 e-folds is dropped.
std::vector<double> DiscGrid::build_volterra(int q, bool inward) const {
    int n = n_radial_;
    std::vector<double> table(static_cast<size_t>(n) * n, 0.0);
    static const int kGL = 24;
    static std::vector<double> gx, gw;
    static std::once_flag once;
    std::call_once(once, [] { gauss_legendre(kGL, gx, gw); });

    std::vector<double> cardinal(n);
    auto accumulate_panel = [&](double* row, double s0, double s1, double ri, int sgn,
                                double kexp) {
        // integral over s in [s0,s1] of f(ri e^{sgn s}) * ri * e^{-kexp * s} ds
        double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
        for (int g = 0; g < kGL; ++g) {
            double s = mid + half * gx[g];
            double rho = ri * std::exp(sgn * s);
            double wq = half * gw[g] * ri * std::exp(-kexp * s);
            if (wq == 0.0 || !std::isfinite(wq)) continue;
            const Panel& p = host_panel(rho);
            double den = 0.0;
            bool hit = false;
            for (int k = 0; k < p.count; ++k) {
                double d = rho - r_[p.start + k];
                if (std::abs(d) < 1e-300) {
                    row[p.start + k] += wq;
                    hit = true;
                    break;
                }
                cardinal[k] = p.bary[k] / d;
                den += cardinal[k];
            }
            if (hit) continue;
            for (int k = 0; k < p.count; ++k)
                row[p.start + k] += wq * cardinal[k] / den;
        }
    };

    for (int i = 0; i < n; ++i) {
        double* row = &table[static_cast<size_t>(i) * n];
        double ri = r_[i];
        if (!inward) {
            // int_{r_i}^{1} f(rho) (r_i/rho)^q drho ; rho = r_i e^{s}
            if (i == n - 1) continue;
            double L = std::log(1.0 / ri);
            if (q >= 2) {
                double smax = std::min(L, 45.0 / (q - 1));
                double br[5] = {0.0, smax / 27, smax / 9, smax / 3, smax};
                for (int b = 0; b < 4; ++b)
                    accumulate_panel(row, br[b], br[b + 1], ri, +1, double(q) - 1.0);
            } else {
                int np = 6;
                for (int b = 0; b < np; ++b)
                    accumulate_panel(row, L * b / np, L * (b + 1) / np, ri, +1, double(q) - 1.0);
            }
        } else {
            // int_{0}^{r_i} f(rho) (rho/r_i)^q drho ; rho = r_i e^{-s}
            double smax = 45.0 / (q + 1);
            double br[5] = {0.0, smax / 27, smax / 9, smax / 3, smax};
            for (int b = 0; b < 4; ++b)
                accumulate_panel(row, br[b], br[b + 1], ri, -1, double(q) + 1.0);
        }
    }
    return table;
}

// The outer table vectors are pre-sized at construction so the references
// handed out here stay valid while other threads trigger builds of further
// exponents; each inner table is filled once under the lock and is immutable
// afterwards.
const std::vector<double>& DiscGrid::volterra_out(int q) const {
    if (q < 0 || q >= static_cast<int>(vol_out_.size()))
        throw usage_error("volterra exponent out of range for this grid");
    std::lock_guard<std::mutex> lk(volterra_mu_);
    if (vol_out_[q].empty()) vol_out_[q] = build_volterra(q, false);
    return vol_out_[q];
}

const std::vector<double>& DiscGrid::volterra_in(int q) const {
    if (q < 0 || q >= static_cast<int>(vol_in_.size()))
        throw usage_error("volterra exponent out of range for this grid");
    std::lock_guard<std::mutex> lk(volterra_mu_);
    if (vol_in_[q].empty()) vol_in_[q] = build_volterra(q, true);
    return vol_in_[q];
}

bool DiscGrid::compatible(const DiscGrid& other) const {
    if (this == &other) return true;
    return n_radial_ == other.n_radial_ && n_angular_ == other.n_angular_ &&
           rule_ == other.rule_;
}

std::shared_ptr<const DiscGrid> DiscGrid::build(int n_radial, int n_angular, RadialRule rule) {
    auto g = std::shared_ptr<DiscGrid>(new DiscGrid());
    g->n_radial_ = n_radial;
    g->n_angular_ = n_angular;
    g->rule_ = rule;
    g->build_radial(n_radial, rule);
    g->build_angular();
    g->build_derivative();
    g->area_w_.resize(g->node_count());
    double dtheta = 2.0 * kPi / n_angular;
    for (int i = 0; i < n_radial; ++i)
        for (int j = 0; j < n_angular; ++j)
            g->area_w_[g->index(i, j)] = g->wr_[i] * g->r_[i] * dtheta;
    // fixed capacity keeps references returned by volterra_out/in stable;
    // the transforms need exponents up to n_angular/2 + 2, the rest is slack
    g->vol_out_.resize(n_angular + 64);
    g->vol_in_.resize(n_angular + 64);
    return g;
}

std::shared_ptr<const DiscGrid> build_grid(int n_radial, int n_angular, DiscGrid::RadialRule rule) {
    if (n_radial < 4) throw config_error("n_radial must be >= 4");
    if (n_angular < 8 || n_angular % 2 != 0)
        throw config_error("n_angular must be >= 8 and even");
    return DiscGrid::build(n_radial, n_angular, rule);
}

} // namespace jdisc
