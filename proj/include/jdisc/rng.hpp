#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace jdisc {

/// Deterministic random stream. mt19937_64 is bit-exact across platforms; the
/// uniform/normal transforms below are written out so results do not depend on
/// the standard library's unspecified distribution algorithms.
class rng {
public:
    explicit rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> normal_complex() {
        double re = normal();
        double im = normal();
        return {re, im};
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace jdisc
