#pragma once

// Rectifiable supports presented as atlases of one-to-one Lipschitz charts,
// with Hausdorff integration through the area and coarea formulas.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rectent/numerics.hpp"

namespace rectent {

using MapFn = std::function<Vector(const Vector&)>;
/// Returns the M x m Jacobian matrix of a chart.
using DifferentialFn = std::function<Matrix(const Vector&)>;

/// A Jacobian value together with a flag raised when it is numerically zero.
struct JacobianValue {
    double value = 0.0;
    bool degenerate = false;
};

/// One-to-one Lipschitz map from a box in R^m into R^M.
///
/// Only the map is mandatory. When the Jacobian determinant, differential or
/// inverse are not supplied they are replaced by central finite differences
/// and a grid-seeded Gauss-Newton projection respectively.
class LipschitzChart {
public:
    LipschitzChart(int param_dim, int ambient_dim, Box domain, MapFn map);

    LipschitzChart& with_jacobian(std::function<double(const Vector&)> jacobian);
    LipschitzChart& with_differential(DifferentialFn differential);
    LipschitzChart& with_inverse(MapFn inverse);
    LipschitzChart& with_lipschitz_bound(double bound);
    LipschitzChart& with_label(std::string label);

    int param_dim() const noexcept { return param_dim_; }
    int ambient_dim() const noexcept { return ambient_dim_; }
    const Box& domain() const noexcept { return domain_; }
    double lipschitz_bound() const noexcept { return lipschitz_bound_; }
    const std::string& label() const noexcept { return label_; }
    bool has_analytic_jacobian() const noexcept { return static_cast<bool>(jacobian_); }
    bool has_inverse() const noexcept { return static_cast<bool>(inverse_); }

    Vector operator()(const Vector& x) const;
    /// Analytic differential when available, otherwise central differences.
    Matrix differential(const Vector& x) const;
    /// Central-difference differential, regardless of analytic forms.
    Matrix finite_difference_differential(const Vector& x) const;
    std::optional<double> analytic_jacobian(const Vector& x) const;

    /// Parameter x with map(x) within `tol` of p and x in the domain, if any.
    std::optional<Vector> locate(const Vector& p, double tol = 1e-9) const;

private:
    int param_dim_;
    int ambient_dim_;
    Box domain_;
    MapFn map_;
    std::function<double(const Vector&)> jacobian_;
    DifferentialFn differential_;
    MapFn inverse_;
    double lipschitz_bound_ = 1.0;
    std::string label_;
};

/// Finite point set, the support of a 0-rectifiable variable.
struct DiscreteSupport {
    std::vector<Vector> points;

    explicit DiscreteSupport(std::vector<Vector> pts);
    int ambient_dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
};

/// Location of a point on a support: chart index and parameter.
struct ChartPoint {
    std::size_t chart = 0;
    Vector param;
};

struct IntegrationOptions {
    /// Negative selects the default: 1e-8 for 1-D charts, 1e-6 otherwise.
    double abs_tol = -1.0;
    double rel_tol = 1e-10;
    std::size_t max_subdivisions = 4000;
    std::size_t initial_panels = 4;
    std::size_t max_evaluations = 20'000'000;
};

/// Union of chart images E = U_k f_k(A_k), or a finite point set when dim == 0.
///
/// Chart images are assumed disjoint up to H^m-null sets; check_disjoint()
/// tests that statistically.
class SupportAtlas {
public:
    SupportAtlas(std::vector<LipschitzChart> charts, std::string name = {});
    explicit SupportAtlas(DiscreteSupport points, std::string name = {});

    int dim() const noexcept { return dim_; }
    int ambient_dim() const noexcept { return ambient_dim_; }
    const std::string& name() const noexcept { return name_; }
    bool is_discrete() const noexcept { return discrete_.has_value(); }
    const std::vector<LipschitzChart>& charts() const noexcept { return charts_; }
    const DiscreteSupport& discrete_points() const;
    /// Number of pieces: charts, or points when discrete.
    std::size_t pieces() const;

    /// H^m(E); cached after the first call.
    double total_measure() const;
    /// First chart containing p, or nothing when p is off the support.
    std::optional<ChartPoint> locate(const Vector& p, double tol = 1e-9) const;
    /// Map a chart parameter to the ambient point.
    Vector point(const ChartPoint& cp) const;

private:
    int dim_ = 0;
    int ambient_dim_ = 0;
    std::vector<LipschitzChart> charts_;
    std::optional<DiscreteSupport> discrete_;
    std::string name_;
    mutable std::optional<double> measure_;
};

/// Integrand evaluated on chart parameters: (chart index, parameter).
using ChartIntegrand = std::function<double(std::size_t, const Vector&)>;

/// J_f(x) = sqrt(det(D^T D)) at a parameter inside the chart domain.
JacobianValue jacobian_determinant(const LipschitzChart& chart, const Vector& x);
/// Same, but always from finite differences (ignores analytic forms).
JacobianValue finite_difference_jacobian(const LipschitzChart& chart, const Vector& x);

/// sum_k int_{A_k} h(k, x) J_{f_k}(x) dL^m(x); counting measure when discrete.
QuadResult integrate_over_support(const SupportAtlas& support, const ChartIntegrand& h,
                                  const IntegrationOptions& opts = {});

/// int_E g dH^m by the area formula.
double hausdorff_integral(const SupportAtlas& support, const FieldFn& g,
                          const IntegrationOptions& opts = {});

/// Jacobian of the coordinate projection restricted to the tangent space of E.
///
/// `coords` are 0-based ambient coordinate indices. `image_dim` is the
/// dimension of the projected set; by default min(|coords|, m). When it is
/// smaller (a product factor living in several coordinates) the Jacobian is
/// the product of the top `image_dim` singular values. Throws DegeneracyError
/// when the chart itself is degenerate at the point (no tangent space).
JacobianValue tangential_projection_jacobian(const SupportAtlas& support,
                                             const std::vector<int>& coords,
                                             const ChartPoint& at, int image_dim = -1);
/// Unthresholded value of the same Jacobian; 0 only where it truly vanishes.
double projected_tangent_volume(const LipschitzChart& chart, const std::vector<int>& coords,
                                const Vector& param, int image_dim = -1);
/// Overload that first locates an ambient point on the support.
JacobianValue tangential_projection_jacobian(const SupportAtlas& support,
                                             const std::vector<int>& coords, const Vector& p,
                                             int image_dim = -1);

struct FiberPoint {
    ChartPoint where;
    Vector point;
    double projection_jacobian = 0.0;
};

struct FiberOptions {
    std::size_t scan_cells = 512;
    double param_tol = 1e-12;
    double degeneracy_threshold = 1e-10;
};

struct FiberIntegral {
    double value = 0.0;
    std::vector<FiberPoint> points;
    std::vector<std::string> warnings;
};

/// Nondegenerate points of the fiber {x in E : x[coords] = y}; m = 1, |coords| = 1.
FiberIntegral fiber_points(const SupportAtlas& support, const std::vector<int>& coords,
                           const Vector& y, const FiberOptions& opts = {});

/// Fiber integral of g / J^E over {x in E : x[coords] = y} (generalized coarea formula).
FiberIntegral coarea_fiber_integral(const SupportAtlas& support, const std::vector<int>& coords,
                                    const Vector& y, const FieldFn& g,
                                    const FiberOptions& opts = {});

/// Sampled one-to-one check: a second parameter is pulled onto the image of a
/// random first one by Gauss-Newton; a distinct preimage means failure.
bool check_injective(const LipschitzChart& chart, std::size_t pairs, std::uint64_t seed,
                     double tol = 1e-9);
/// Sampled disjointness check: points of one chart never locate on another.
bool check_disjoint(const SupportAtlas& support, std::size_t samples_per_chart,
                    std::uint64_t seed, double tol = 1e-9);

// Catalog charts and supports.

/// (cos t, sin t) for t in [lo, hi); the default covers the whole unit circle.
LipschitzChart circle_chart(double lo = 0.0, double hi = 6.283185307179586);
/// x -> (x, 0) from the box [-half_width, half_width]^m into R^M.
LipschitzChart embedding_chart(int m, int ambient, double half_width = 10.0);
/// z -> z z^T (row-major in R^{m*m}) on the half box z_1 >= 0, where it is one-to-one.
LipschitzChart rank_one_chart(int m, double half_width = 10.0);
/// (x, y) -> (a(x), b(y)) on the product of the two domains.
LipschitzChart product_chart(const LipschitzChart& a, const LipschitzChart& b);

SupportAtlas unit_circle_support();
SupportAtlas embedding_support(int m, int ambient, double half_width = 10.0);
SupportAtlas rank_one_support(int m, double half_width = 10.0);
SupportAtlas product_support(const SupportAtlas& a, const SupportAtlas& b);

/// Lookup by name: "circle", "embedding:<m>:<M>", "wishart1:<m>".
SupportAtlas support_by_name(const std::string& name);

}  // namespace rectent
