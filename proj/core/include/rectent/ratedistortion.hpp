#pragma once

// Shannon lower bound for rectifiable sources under a difference distortion,
// its envelope over s, and the constructive n-arc upper bound on the circle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rectent/geometry.hpp"

namespace rectent {

/// d(x, y) between a source point and a reproduction point.
struct Distortion {
    std::string name;
    std::function<double(const Vector&, const Vector&)> d;
    bool squared_error = false;
};

Distortion squared_error();

/// gamma(s) = sup_y int_E exp(-s d(x, y)) dH^m(x), attained at y_star, and
/// D*(s), the mean distortion under the tilted density at y_star.
struct GammaPoint {
    double s = 0.0;
    Vector y_star;
    double gamma = 0.0;
    double log_gamma = 0.0;
    double d_star = 0.0;
    std::vector<std::string> warnings;
};

struct GammaOptions {
    /// Absolute tolerance of the inner integral over E.
    double inner_abs_tol = 1e-10;
    /// Scan cells for stationary points of the radial profile (circle path).
    std::size_t scan_cells = 64;
    double root_tol = 1e-12;
};

/// The unit circle under squared error uses the radial reduction y = (y1, 0),
/// y1 in [0, 1], comparing y1 = 0, y1 = 1 and every stationary point of
/// int (cos phi - y1) exp(2 s y1 cos phi) dphi. Other supports or distortions
/// use a grid search over the bounding box refined by compass search.
GammaPoint gamma_of_s(const SupportAtlas& support, const Distortion& distortion, double s,
                      const GammaOptions& opts = {});

/// log f_s(y1) = log int exp(-s |x - (y1, 0)|^2) dH^1 on the unit circle.
double circle_log_profile(double s, double y1, double abs_tol = 1e-10);

/// R_SLB(D, s) = h - s D - log gamma(s).
double slb(double entropy, double D, double s, double gamma);
double slb(double entropy, double D, const GammaPoint& g);

struct SlbSweepPoint {
    double s = 0.0;
    double R = 0.0;
};

std::vector<SlbSweepPoint> slb_sweep(double entropy, double D, const SupportAtlas& support,
                                     const Distortion& distortion, const std::vector<double>& s_grid,
                                     const GammaOptions& opts = {});

/// Maximizer of R_SLB(D, s) over s in [s_lo, s_hi]: integer grid then golden section.
SlbSweepPoint maximize_slb(double entropy, double D, const SupportAtlas& support,
                           const Distortion& distortion, double s_lo, double s_hi,
                           const GammaOptions& opts = {});

struct ParametricPoint {
    double s = 0.0;
    double D = 0.0;
    double R = 0.0;
};

enum class EnvelopeBranch { param, horizontal };
std::string to_string(EnvelopeBranch branch);

struct EnvelopePoint {
    double D = 0.0;
    double R = 0.0;
    EnvelopeBranch branch = EnvelopeBranch::param;
    /// s of the best affine bound at this D (0 on the horizontal branch).
    double s = 0.0;
};

struct SlbCurve {
    std::vector<ParametricPoint> points;
    /// R = h - log H^m(E), the s = 0 bound.
    double horizontal = 0.0;
    std::vector<EnvelopePoint> envelope;
};

/// Parametric points (D*(s), R_SLB(D*(s), s)) for s in s_grid, and on D_grid
/// the largest of the horizontal line and the affine bounds R_SLB(D, s) over
/// the grid. Every envelope value is itself a valid lower bound.
SlbCurve slb_envelope(double entropy, const SupportAtlas& support, const Distortion& distortion,
                      const std::vector<double>& D_grid, const std::vector<double>& s_grid,
                      const GammaOptions& opts = {});

/// D_bar_n = 1 - ((n / pi) sin(pi / n))^2 and R = log n for the n-arc quantizer.
struct RdUpperPoint {
    std::size_t n = 1;
    double D_bar = 1.0;
    double R = 0.0;
};

RdUpperPoint rd_upper_bound(std::size_t n);

/// Piecewise-linear interpolation of the points n = 1..n_max in (D, R).
class RdUpperCurve {
public:
    explicit RdUpperCurve(std::size_t n_max);

    /// Upper bound at D; 0 for D >= 1, nothing below D_bar_{n_max}.
    std::optional<double> operator()(double D) const;
    const std::vector<RdUpperPoint>& points() const noexcept { return points_; }
    double min_distortion() const { return points_.back().D_bar; }

private:
    std::vector<RdUpperPoint> points_;
};

RdUpperCurve rd_upper_curve(std::size_t n_max);

struct ArcQuantizerDistortion {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Monte Carlo squared error of the n-arc quantizer on the uniform circle:
/// each arc maps to the point (n / pi) sin(pi / n) on the ray through its centre.
ArcQuantizerDistortion arc_quantizer_distortion(std::size_t n, std::size_t samples,
                                                std::uint64_t seed);

struct GapRow {
    double D = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double gap = 0.0;
};

/// upper - lower on every envelope D where the upper curve is defined; throws
/// BoundViolation when a gap is below -1e-9.
std::vector<GapRow> gap_report(const SlbCurve& lower, const RdUpperCurve& upper);

}  // namespace rectent
