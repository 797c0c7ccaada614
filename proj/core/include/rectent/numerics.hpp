#pragma once

// Quadrature, cubature and scalar root finding shared by every module.

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace rectent {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarFn = std::function<double(double)>;
using FieldFn = std::function<double(const Vector&)>;

/// Axis-aligned bounded box [lo, hi] in R^d.
struct Box {
    Vector lo;
    Vector hi;

    Box() = default;
    Box(Vector lower, Vector upper);
    static Box interval(double a, double b);
    static Box cube(int dim, double a, double b);

    int dim() const noexcept { return static_cast<int>(lo.size()); }
    double volume() const;
    bool contains(const Vector& x, double slack = 0.0) const;
    Vector center() const { return 0.5 * (lo + hi); }
    /// Cartesian product of two boxes.
    static Box product(const Box& a, const Box& b);
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct QuadOptions {
    double abs_tol = 1e-8;
    double rel_tol = 1e-10;
    std::size_t max_subdivisions = 4000;
    /// Number of equal panels the interval is cut into before adaptation starts.
    std::size_t initial_panels = 1;
    bool throw_on_failure = true;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature of f over [a, b].
///
/// The subinterval with the largest error estimate is bisected until the
/// summed estimate drops below max(abs_tol, rel_tol * |I|). Throws
/// ConvergenceError when the budget runs out (unless throw_on_failure is
/// false) and Error when the integrand produces a non-finite value.
QuadResult integrate(const ScalarFn& f, double a, double b, const QuadOptions& opts = {});

struct CubatureOptions {
    double abs_tol = 1e-6;
    double rel_tol = 1e-9;
    std::size_t max_evaluations = 20'000'000;
    /// Equal panels per axis before adaptation starts.
    std::size_t initial_panels = 2;
    bool throw_on_failure = true;
};

/// Adaptive tensor-product Gauss-Kronrod (7/15) cubature over a box in R^d, d <= 4.
///
/// Each box carries the product-Kronrod estimate; the error is the distance
/// to the product-Gauss estimate on the same nodes. The worst box is split in
/// half along the axis whose Gauss/Kronrod swap changes the result most.
QuadResult integrate_box(const FieldFn& f, const Box& box, const CubatureOptions& opts = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(std::size_t n);

/// Bisection on a sign-changing bracket until the bracket is shorter than xtol.
double bisect_root(const ScalarFn& f, double a, double b, double xtol = 1e-13,
                   int max_iter = 200);

/// All sign-change roots of f in [a, b), located by scanning `cells` equal cells
/// and bisecting every bracket. Grid nodes where f is exactly zero count as roots.
std::vector<double> find_roots(const ScalarFn& f, double a, double b, std::size_t cells,
                               double xtol = 1e-13);

struct ScalarOptimum {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [a, b].
ScalarOptimum golden_section_maximize(const ScalarFn& f, double a, double b,
                                      double xtol = 1e-10);

/// Log-spaced grid of `points` values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t points);
/// Linearly spaced grid of `points` values from lo to hi inclusive.
std::vector<double> lin_space(double lo, double hi, std::size_t points);

}  // namespace rectent
