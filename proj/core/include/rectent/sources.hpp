#pragma once

// Rectifiable random variables: a support atlas, a Hausdorff density on it and
// a deterministic sampler.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rectent/geometry.hpp"
#include "rectent/rng.hpp"

namespace rectent {

/// Continuous density of a parameter vector on a bounded box in R^m.
struct ParamDensity {
    Box domain;
    FieldFn pdf;
    std::function<Vector(Rng&)> sampler;
    /// Differential entropy in nats, when known in closed form.
    std::optional<double> entropy;
    std::string name;
};

/// Wraps a pdf and attaches a generic sampler: inverse CDF for m = 1 (monotone
/// cubic interpolation of the integrated CDF on 4096 cells), rejection from the
/// box for m >= 2.
ParamDensity make_param_density(Box domain, FieldFn pdf, std::string name = {},
                                std::optional<double> entropy = std::nullopt);

/// Uniform angle on [0, 2pi).
ParamDensity uniform_angle();
/// Angle pdf exp(kappa cos t) / (2 pi I0(kappa)) on [0, 2pi).
ParamDensity von_mises_angle(double kappa);
/// Standard normal on R^m truncated to [-half_width, half_width]^m (mass loss
/// below 1e-22 at the default width, ignored in the pdf).
ParamDensity standard_normal(int m, double half_width = 10.0);
/// Zero-mean bivariate normal with unit variances and correlation rho.
ParamDensity correlated_normal(double rho, double half_width = 10.0);

/// Density value at an ambient point; on_support is false when the point is
/// not on the support, in which case value is 0.
struct DensityValue {
    double value = 0.0;
    bool on_support = false;
};

/// A sampled point together with its density, which the sampler knows exactly.
struct Draw {
    Vector point;
    double density = 0.0;
};

/// Hausdorff density on chart parameters: theta(f_k(x)) given (k, x).
using ChartDensityFn = std::function<double(std::size_t, const Vector&)>;
using DrawFn = std::function<Draw(Rng&)>;

class RectifiableSource {
public:
    RectifiableSource(SupportAtlas support, ChartDensityFn density, DrawFn draw,
                      std::string name = {}, std::optional<double> analytic_entropy = std::nullopt);

    const SupportAtlas& support() const noexcept { return *support_; }
    int dim() const noexcept { return support_->dim(); }
    int ambient_dim() const noexcept { return support_->ambient_dim(); }
    const std::string& name() const noexcept { return name_; }
    std::optional<double> analytic_entropy() const noexcept { return analytic_entropy_; }

    /// theta^m at an ambient point (locates the point on the atlas first).
    DensityValue density(const Vector& x) const;
    /// theta^m at the image of a chart parameter.
    double chart_density(std::size_t chart, const Vector& param) const;

    Draw draw(Rng& rng) const { return draw_(rng); }
    /// n points from a fresh stream seeded with `seed`.
    std::vector<Vector> sample(std::uint64_t seed, std::size_t n) const;

    /// Independent factors when built by product_source, else null.
    const std::shared_ptr<const RectifiableSource>& first_factor() const noexcept { return first_; }
    const std::shared_ptr<const RectifiableSource>& second_factor() const noexcept { return second_; }

private:
    friend RectifiableSource product_source(const RectifiableSource&, const RectifiableSource&);

    std::shared_ptr<const SupportAtlas> support_;
    ChartDensityFn density_;
    DrawFn draw_;
    std::string name_;
    std::optional<double> analytic_entropy_;
    std::shared_ptr<const RectifiableSource> first_;
    std::shared_ptr<const RectifiableSource> second_;
};

/// theta(y) = f(phi^-1(y)) / J_phi(phi^-1(y)) for a one-to-one chart.
RectifiableSource pushforward_source(const ParamDensity& base, const LipschitzChart& chart,
                                     std::string name = {},
                                     std::optional<double> analytic_entropy = std::nullopt);

/// Two-to-one pushforward through the rank-one map z -> z z^T, whose preimages
/// are {z, -z}; theta = (f(z) + f(-z)) / J(z). `base` lives on a box symmetric
/// about the origin; the chart covers its half z_1 >= 0.
RectifiableSource symmetrized_pushforward(const ParamDensity& base, int m,
                                          std::string name = {},
                                          std::optional<double> analytic_entropy = std::nullopt);

RectifiableSource circle_source(const ParamDensity& angle_pdf, std::string name = {});

/// Independent pair (x, y): product atlas, product density, independent streams.
RectifiableSource product_source(const RectifiableSource& a, const RectifiableSource& b);

/// Finite-valued source on distinct points; theta is the probability mass function.
RectifiableSource discrete_source(std::vector<Vector> points, std::vector<double> probabilities,
                                  std::string name = {});

/// Image of a source under x -> u x for an orthogonal matrix u; entropy is unchanged.
RectifiableSource rotated_source(const RectifiableSource& source, const Matrix& u);

/// Closed-form entropy of the rank-one Wishart source for standard normal z in R^m.
double rank_one_normal_entropy(int m);

struct SourceCheck {
    double normalization = 0.0;
    double max_support_distance = 0.0;
    double min_sampled_density = 0.0;
};

/// Normalization by quadrature plus on-support and positivity checks on samples.
SourceCheck check_source(const RectifiableSource& source, std::uint64_t seed,
                         std::size_t samples = 1000, const IntegrationOptions& opts = {});

}  // namespace rectent
