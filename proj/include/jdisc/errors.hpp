#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jdisc {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration or violated precondition (bad sizes, exponents, ranges).
class config_error : public error {
public:
    using error::error;
};

/// API misuse: incompatible grids, asymmetric matrix passed where symmetry is required.
class usage_error : public error {
public:
    using error::error;
};

/// No admissible exponent: every candidate p failed the contraction condition.
class infeasibility_error : public error {
public:
    infeasibility_error(const std::string& msg,
                        std::vector<std::pair<double, double>> failing)
        : error(msg), failing_products(std::move(failing)) {}
    /// (p, a0 * safety * norm_estimate) for each rejected candidate.
    std::vector<std::pair<double, double>> failing_products;
};

/// Iteration cap reached before the stopping tolerance.
class convergence_error : public error {
public:
    convergence_error(const std::string& msg, double last_ratio_, int iters_)
        : error(msg), last_ratio(last_ratio_), iters(iters_) {}
    double last_ratio;
    int iters;
};

/// Singular or degenerate data: non-invertible J_st + J, vanishing boundary trace,
/// Morse coefficient at the excluded value 1.
class degeneracy_error : public error {
public:
    using error::error;
};

/// A numerical fit did not reach its required residual.
class approximation_error : public error {
public:
    approximation_error(const std::string& msg, double residual_)
        : error(msg), residual(residual_) {}
    double residual;
};

/// Extracted coefficient violates |a| < 1.
class ellipticity_error : public error {
public:
    using error::error;
};

/// A constructed object failed one of its own certified properties.
class construction_error : public error {
public:
    using error::error;
};

} // namespace jdisc
