#pragma once

// Empirical checks of the asymptotic equipartition property for i.i.d. blocks.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "rectent/sources.hpp"

namespace rectent {

/// Bounds on H^{nm}(A_eps^(n)): upper e^{n(h+eps)}, lower (1-delta) e^{n(h-eps)}.
struct MeasureBounds {
    double lower = 0.0;
    double upper = 0.0;
    double delta = 0.0;
};

struct TypicalSetReport {
    std::size_t n = 0;
    double epsilon = 0.0;
    std::size_t trials = 0;
    std::size_t typical = 0;
    double empirical_prob = 0.0;
    /// Binomial standard error of empirical_prob.
    double std_error = 0.0;
    double entropy_ref = 0.0;
    /// Filled with delta = 1 - empirical_prob from the same run.
    MeasureBounds measure_bounds;
};

/// Fraction of `trials` i.i.d. blocks of length n whose mean of -log theta is
/// within epsilon of the entropy. Trial t draws from Rng(mix_seed(seed, t)).
/// The entropy defaults to the closed form, or quadrature when there is none.
TypicalSetReport empirical_typicality(const RectifiableSource& source, std::size_t n,
                                      double epsilon, std::size_t trials, std::uint64_t seed,
                                      std::optional<double> entropy = std::nullopt);

MeasureBounds typical_measure_bounds(double entropy, std::size_t n, double epsilon, double delta);

/// H^{nm}(A_eps^(n)) for n in {1, 2} by integrating the typical-set indicator
/// over E^n, with the region boundaries resolved by root finding. Supports
/// curves (m = 1) and finite sources (m = 0).
double typical_measure_estimate(const RectifiableSource& source, std::size_t n, double epsilon,
                                std::optional<double> entropy = std::nullopt,
                                double tol = 1e-9);

}  // namespace rectent
