#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

namespace jdisc {

using cd = std::complex<double>;

/// Polar discretization of the closed unit disc.
///
/// Tensor product of radial quadrature nodes in (0, 1] with equispaced angles
/// on [0, 2pi). The outermost ring sits exactly on |zeta| = 1 so boundary
/// traces need no extrapolation; no node sits at the origin. The angular
/// direction is treated spectrally (Fourier modes), the radial direction by
/// global polynomial collocation on the quadrature nodes.
class DiscGrid {
public:
    enum class RadialRule {
        gauss_radau,    // global Gauss-Radau, right endpoint fixed at r = 1
        composite_gl8,  // panels of 8 Gauss-Legendre nodes, Radau-right last panel
    };

    static std::shared_ptr<const DiscGrid> build(int n_radial, int n_angular,
                                                 RadialRule rule = RadialRule::gauss_radau);

    int n_radial() const { return n_radial_; }
    int n_angular() const { return n_angular_; }
    RadialRule rule() const { return rule_; }
    int node_count() const { return n_radial_ * n_angular_; }

    /// Radii in ascending order; back() == 1.0 exactly.
    const std::vector<double>& radial_nodes() const { return r_; }
    /// Weights for integrals over [0,1] dr (line measure, no r factor).
    const std::vector<double>& radial_weights() const { return wr_; }
    /// Per-node area weights; sum is pi to machine accuracy.
    const std::vector<double>& quad_weights() const { return area_w_; }

    double theta(int j) const { return 6.283185307179586476925286766559 * j / n_angular_; }
    double radius(int i) const { return r_[i]; }
    cd node(int i, int j) const;
    int index(int i, int j) const { return i * n_angular_ + j; }

    /// Signed Fourier mode for storage slot k in [0, n_angular).
    int mode_of_slot(int k) const { return k < n_angular_ / 2 ? k : k - n_angular_; }
    /// Storage slot for signed mode m in [-n_angular/2, n_angular/2), or -1.
    int slot_of_mode(int m) const {
        if (m >= n_angular_ / 2 || m < -n_angular_ / 2) return -1;
        return m >= 0 ? m : m + n_angular_;
    }

    /// Forward angular transform of one ring: c_m = (1/N) sum f_j e^{-i m theta_j}.
    void ring_to_modes(const cd* ring, cd* modes) const;
    /// Inverse transform: f_j = sum c_m e^{i m theta_j}.
    void modes_to_ring(const cd* modes, cd* ring) const;

    /// Spectral radial derivative of a per-mode radial profile (length n_radial).
    void radial_derivative(const cd* profile, cd* out) const;

    /// Barycentric evaluation of the collocation interpolant at radius x in [0,1].
    double interpolate(const std::vector<double>& profile, double x) const;
    cd interpolate(const cd* profile, double x) const;

    /// Volterra quadrature rows. Applying row i of the "out" table of exponent q
    /// to per-node samples f(rho_j) yields  int_{r_i}^{1} f(rho) (r_i/rho)^q drho;
    /// the "in" table yields                int_{0}^{r_i}  f(rho) (rho/r_i)^q drho.
    /// Kernels are bounded by 1, so the rows never amplify sample noise.
    const std::vector<double>& volterra_out(int q) const;
    const std::vector<double>& volterra_in(int q) const;

    bool compatible(const DiscGrid& other) const;

private:
    DiscGrid() = default;

    struct Panel {
        int start;
        int count;
        std::vector<double> bary; // barycentric weights of the panel's nodes
    };

    void build_radial(int n, RadialRule rule);
    void build_angular();
    void build_derivative();
    std::vector<double> build_volterra(int q, bool inward) const;
    const Panel& host_panel(double x) const;

    int n_radial_ = 0;
    int n_angular_ = 0;
    RadialRule rule_ = RadialRule::gauss_radau;
    std::vector<double> r_, wr_, area_w_;
    std::vector<Panel> panels_;
    std::vector<double> deriv_; // n_radial x n_radial, row-major
    std::vector<cd> twiddle_;   // e^{-2pi i j k / N} cache for the angular DFT
    bool pow2_ = false;

    mutable std::mutex volterra_mu_;
    mutable std::vector<std::vector<double>> vol_out_, vol_in_;
};

/// Grid factory with precondition checks (n_radial >= 4, n_angular >= 8 and even).
std::shared_ptr<const DiscGrid> build_grid(int n_radial, int n_angular,
                                           DiscGrid::RadialRule rule = DiscGrid::RadialRule::gauss_radau);

} // namespace jdisc
