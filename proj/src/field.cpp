#include "jdisc/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "jdisc/errors.hpp"

namespace jdisc {

ComplexField::ComplexField(std::shared_ptr<const DiscGrid> grid, cd fill)
    : grid_(std::move(grid)), v_(grid_->node_count(), fill) {}

ComplexField::ComplexField(std::shared_ptr<const DiscGrid> grid, std::vector<cd> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
    if (static_cast<int>(v_.size()) != grid_->node_count())
        throw usage_error("field sample count does not match grid");
}

void ComplexField::require_same_grid(const ComplexField& o) const {
    if (!grid_ || !o.grid_ || !grid_->compatible(*o.grid_))
        throw usage_error("fields live on different grids");
}

void ComplexField::require_finite(const char* what) const {
    for (const cd& z : v_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw construction_error(std::string(what) + ": non-finite sample");
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
    require_same_grid(o);
    for (size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
    require_same_grid(o);
    for (size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
}

ComplexField& ComplexField::operator*=(const ComplexField& o) {
    require_same_grid(o);
    for (size_t k = 0; k < v_.size(); ++k) v_[k] *= o.v_[k];
    return *this;
}

ComplexField& ComplexField::operator*=(cd s) {
    for (auto& z : v_) z *= s;
    return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(ComplexField a, const ComplexField& b) { return a *= b; }
ComplexField operator*(cd s, ComplexField a) { return a *= s; }

ComplexField conj(const ComplexField& f) {
    ComplexField out = f;
    for (auto& z : out.values()) z = std::conj(z);
    return out;
}

ComplexField ComplexField::sample(std::shared_ptr<const DiscGrid> grid,
                                  const std::function<cd(cd)>& f) {
    ComplexField out(grid);
    const DiscGrid& g = out.grid();
    for (int i = 0; i < g.n_radial(); ++i)
        for (int j = 0; j < g.n_angular(); ++j) out(i, j) = f(g.node(i, j));
    return out;
}

ComplexField ComplexField::coordinate(std::shared_ptr<const DiscGrid> grid) {
    return sample(std::move(grid), [](cd z) { return z; });
}

BoundaryTrace boundary_trace(const ComplexField& f) {
    const DiscGrid& g = f.grid();
    BoundaryTrace t;
    t.values.resize(g.n_angular());
    int last = g.n_radial() - 1;
    for (int j = 0; j < g.n_angular(); ++j) t.values[j] = f(last, j);
    return t;
}

void write_csv(std::ostream& os, const ComplexField& f) {
    const DiscGrid& g = f.grid();
    os << "r,theta,re,im\n";
    char buf[128];
    for (int i = 0; i < g.n_radial(); ++i)
        for (int j = 0; j < g.n_angular(); ++j) {
            cd z = f(i, j);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", g.radius(i),
                          g.theta(j), z.real(), z.imag());
            os << buf;
        }
}

void write_csv_file(const std::string& path, const ComplexField& f) {
    std::ofstream os(path);
    if (!os) throw error("cannot open " + path + " for writing");
    write_csv(os, f);
    os.flush();
    if (!os) throw error("write failed: " + path);
}

ComplexField read_csv(std::istream& is, std::shared_ptr<const DiscGrid> grid) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("r,theta", 0) != 0)
        throw usage_error("bad field CSV header");
    ComplexField out(std::move(grid));
    const DiscGrid& g = out.grid();
    for (int i = 0; i < g.n_radial(); ++i)
        for (int j = 0; j < g.n_angular(); ++j) {
            if (!std::getline(is, line)) throw usage_error("truncated field CSV");
            double r, th, re, im;
            if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg", &r, &th, &re, &im) != 4)
                throw usage_error("bad field CSV row: " + line);
            out(i, j) = cd(re, im);
        }
    return out;
}

} // namespace jdisc
