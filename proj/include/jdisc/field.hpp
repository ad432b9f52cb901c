#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "jdisc/grid.hpp"

namespace jdisc {

/// Complex-valued function sampled on a DiscGrid. The universal carrier for
/// f, u, v, h, z, w. Immutable grids are shared; values are plain samples in
/// ring-major order (radius outer, angle inner).
class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(std::shared_ptr<const DiscGrid> grid, cd fill = cd(0.0, 0.0));
    ComplexField(std::shared_ptr<const DiscGrid> grid, std::vector<cd> values);

    const DiscGrid& grid() const { return *grid_; }
    std::shared_ptr<const DiscGrid> grid_ptr() const { return grid_; }
    int size() const { return static_cast<int>(v_.size()); }

    cd& operator()(int i, int j) { return v_[grid_->index(i, j)]; }
    cd operator()(int i, int j) const { return v_[grid_->index(i, j)]; }
    cd& operator[](int k) { return v_[k]; }
    cd operator[](int k) const { return v_[k]; }
    const std::vector<cd>& values() const { return v_; }
    std::vector<cd>& values() { return v_; }

    ComplexField& operator+=(const ComplexField& o);
    ComplexField& operator-=(const ComplexField& o);
    ComplexField& operator*=(const ComplexField& o); // pointwise
    ComplexField& operator*=(cd s);

    /// Throws usage_error unless the two fields live on compatible grids.
    void require_same_grid(const ComplexField& o) const;
    /// Throws if any sample is NaN or infinite.
    void require_finite(const char* what) const;

    /// Samples of a function of the grid point zeta.
    static ComplexField sample(std::shared_ptr<const DiscGrid> grid,
                               const std::function<cd(cd)>& f);
    /// Field zeta -> zeta.
    static ComplexField coordinate(std::shared_ptr<const DiscGrid> grid);

private:
    std::shared_ptr<const DiscGrid> grid_;
    std::vector<cd> v_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(ComplexField a, const ComplexField& b);
ComplexField operator*(cd s, ComplexField a);
ComplexField conj(const ComplexField& f);

/// Restriction to the outermost ring |zeta| = 1; one value per angular node.
struct BoundaryTrace {
    std::vector<cd> values;
};

BoundaryTrace boundary_trace(const ComplexField& f);

/// CSV serialization: header "r,theta,re,im", ring-major rows, 17 significant digits.
void write_csv(std::ostream& os, const ComplexField& f);
void write_csv_file(const std::string& path, const ComplexField& f);
ComplexField read_csv(std::istream& is, std::shared_ptr<const DiscGrid> grid);

} // namespace jdisc
