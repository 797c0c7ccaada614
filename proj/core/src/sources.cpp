#include "rectent/sources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>

#include "rectent/error.hpp"

namespace rectent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Inverse CDF of a 1-D pdf: cumulative integrals on a uniform grid joined by
// Fritsch-Carlson limited cubic Hermite pieces, whose slopes are the pdf itself.
class InverseCdf {
public:
    InverseCdf(const FieldFn& pdf, double a, double b, std::size_t cells = 4096)
        : a_(a), h_((b - a) / static_cast<double>(cells)), cdf_(cells + 1, 0.0),
          slope_(cells + 1, 0.0) {
        Vector x(1);
        auto f = [&](double t) {
            x[0] = t;
            return pdf(x);
        };
        QuadOptions q;
        q.abs_tol = 1e-15;
        q.rel_tol = 1e-12;
        for (std::size_t i = 0; i < cells; ++i) {
            const double lo = a + h_ * static_cast<double>(i);
            cdf_[i + 1] = cdf_[i] + integrate(f, lo, lo + h_, q).value;
        }
        const double total = cdf_.back();
        if (!(total > 0.0)) throw InvalidArgument("ParamDensity: pdf integrates to zero");
        for (std::size_t i = 0; i <= cells; ++i) {
            cdf_[i] /= total;
            slope_[i] = f(a + h_ * static_cast<double>(i)) / total;
        }
        cdf_.back() = 1.0;
        for (std::size_t i = 0; i < cells; ++i) {
            const double secant = (cdf_[i + 1] - cdf_[i]) / h_;
            if (secant <= 0.0) {
                slope_[i] = slope_[i + 1] = 0.0;
                continue;
            }
            const double alpha = slope_[i] / secant;
            const double beta = slope_[i + 1] / secant;
            const double r2 = alpha * alpha + beta * beta;
            if (r2 > 9.0) {
                const double tau = 3.0 / std::sqrt(r2);
                slope_[i] = tau * alpha * secant;
                slope_[i + 1] = tau * beta * secant;
            }
        }
    }

    double operator()(double u) const {
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t i = static_cast<std::size_t>(std::distance(cdf_.begin(), it));
        i = std::clamp<std::size_t>(i, 1, cdf_.size() - 1) - 1;
        double lo = 0.0;
        double hi = 1.0;
        for (int it_count = 0; it_count < 60; ++it_count) {
            const double mid = 0.5 * (lo + hi);
            if (hermite(i, mid) <= u) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return a_ + h_ * (static_cast<double>(i) + 0.5 * (lo + hi));
    }

private:
    double hermite(std::size_t i, double t) const {
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * cdf_[i] + (t3 - 2 * t2 + t) * h_ * slope_[i] +
               (-2 * t3 + 3 * t2) * cdf_[i + 1] + (t3 - t2) * h_ * slope_[i + 1];
    }

    double a_;
    double h_;
    std::vector<double> cdf_;
    std::vector<double> slope_;
};

std::function<Vector(Rng&)> rejection_sampler(const Box& domain, const FieldFn& pdf) {
    const int m = domain.dim();
    const int per_axis = m == 2 ? 65 : 25;
    double peak = 0.0;
    Vector x(m);
    std::vector<int> idx(m, 0);
    while (true) {
        for (int j = 0; j < m; ++j) {
            x[j] = domain.lo[j] + idx[j] * (domain.hi[j] - domain.lo[j]) / (per_axis - 1);
        }
        peak = std::max(peak, pdf(x));
        int j = 0;
        while (j < m && ++idx[j] == per_axis) idx[j++] = 0;
        if (j == m) break;
    }
    peak = std::max(peak, pdf(domain.center()));
    if (!(peak > 0.0)) throw InvalidArgument("ParamDensity: pdf vanishes on the sampling grid");
    const double bound = 1.25 * peak;
    return [domain, pdf, bound](Rng& rng) {
        Vector y(domain.dim());
        while (true) {
            for (int j = 0; j < domain.dim(); ++j) y[j] = rng.uniform(domain.lo[j], domain.hi[j]);
            if (rng.uniform() * bound < pdf(y)) return y;
        }
    };
}

void check_discrete_pmf(const std::vector<double>& p) {
    double total = 0.0;
    for (double v : p) {
        if (!(v > 0.0)) throw InvalidArgument("discrete_source: probabilities must be positive");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("discrete_source: probabilities must sum to 1");
}

}  // namespace

ParamDensity make_param_density(Box domain, FieldFn pdf, std::string name,
                                std::optional<double> entropy) {
    if (!pdf) throw InvalidArgument("ParamDensity: pdf is empty");
    ParamDensity d{std::move(domain), std::move(pdf), {}, entropy, std::move(name)};
    if (d.domain.dim() == 1) {
        auto inv = std::make_shared<InverseCdf>(d.pdf, d.domain.lo[0], d.domain.hi[0]);
        d.sampler = [inv](Rng& rng) { return Vector::Constant(1, (*inv)(rng.uniform())); };
    } else {
        d.sampler = rejection_sampler(d.domain, d.pdf);
    }
    return d;
}

ParamDensity uniform_angle() {
    ParamDensity d;
    d.domain = Box::interval(0.0, kTwoPi);
    d.pdf = [](const Vector&) { return 1.0 / kTwoPi; };
    d.sampler = [](Rng& rng) { return Vector::Constant(1, kTwoPi * rng.uniform()); };
    d.entropy = std::log(kTwoPi);
    d.name = "uniform";
    return d;
}

ParamDensity von_mises_angle(double kappa) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa) || kappa > 500.0) {
        throw InvalidArgument("von_mises_angle: kappa must lie in [0, 500]");
    }
    if (kappa == 0.0) return uniform_angle();
    const double i0 = std::cyl_bessel_i(0.0, kappa);
    const double i1 = std::cyl_bessel_i(1.0, kappa);
    const double norm = kTwoPi * i0;
    return make_param_density(
        Box::interval(0.0, kTwoPi),
        [kappa, norm](const Vector& t) { return std::exp(kappa * std::cos(t[0])) / norm; },
        "vonmises", std::log(norm) - kappa * i1 / i0);
}

ParamDensity standard_normal(int m, double half_width) {
    if (m < 1) throw InvalidArgument("standard_normal: m must be positive");
    ParamDensity d;
    d.domain = Box::cube(m, -half_width, half_width);
    const double log_norm = -0.5 * m * std::log(kTwoPi);
    d.pdf = [log_norm](const Vector& x) { return std::exp(log_norm - 0.5 * x.squaredNorm()); };
    d.sampler = [m, half_width](Rng& rng) {
        Vector x(m);
        for (int j = 0; j < m; ++j) {
            do {
                x[j] = rng.normal();
            } while (std::abs(x[j]) > half_width);
        }
        return x;
    };
    d.entropy = 0.5 * m * std::log(kTwoPi * std::numbers::e);
    d.name = "normal";
    return d;
}

ParamDensity correlated_normal(double rho, double half_width) {
    if (!(std::abs(rho) < 1.0)) throw InvalidArgument("correlated_normal: need |rho| < 1");
    const double c = std::sqrt(1.0 - rho * rho);
    ParamDensity d;
    d.domain = Box::cube(2, -half_width, half_width);
    d.pdf = [rho, c](const Vector& x) {
        const double q = (x[0] * x[0] - 2 * rho * x[0] * x[1] + x[1] * x[1]) / (c * c);
        return std::exp(-0.5 * q) / (kTwoPi * c);
    };
    d.sampler = [rho, c, half_width](Rng& rng) {
        Vector x(2);
        do {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            x << z1, rho * z1 + c * z2;
        } while (x.cwiseAbs().maxCoeff() > half_width);
        return x;
    };
    d.entropy = std::log(kTwoPi * std::numbers::e) + 0.5 * std::log(1.0 - rho * rho);
    d.name = "gauss2";
    return d;
}

RectifiableSource::RectifiableSource(SupportAtlas support, ChartDensityFn density, DrawFn draw,
                                     std::string name, std::optional<double> analytic_entropy)
    : support_(std::make_shared<const SupportAtlas>(std::move(support))),
      density_(std::move(density)), draw_(std::move(draw)), name_(std::move(name)),
      analytic_entropy_(analytic_entropy) {
    if (!density_ || !draw_) throw InvalidArgument("RectifiableSource: density and sampler required");
}

DensityValue RectifiableSource::density(const Vector& x) const {
    const auto at = support_->locate(x, 1e-9);
    if (!at) return {0.0, false};
    return {density_(at->chart, at->param), true};
}

double RectifiableSource::chart_density(std::size_t chart, const Vector& param) const {
    return density_(chart, param);
}

std::vector<Vector> RectifiableSource::sample(std::uint64_t seed, std::size_t n) const {
    if (n < 1) throw InvalidArgument("sample: n must be at least 1");
    Rng rng(seed);
    std::vector<Vector> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw_(rng).point);
    return out;
}

RectifiableSource pushforward_source(const ParamDensity& base, const LipschitzChart& chart,
                                     std::string name, std::optional<double> analytic_entropy) {
    if (base.domain.dim() != chart.param_dim()) {
        throw InvalidArgument("pushforward_source: base and chart dimensions differ");
    }
    if (!chart.domain().contains(base.domain.lo, 1e-12) || !chart.domain().contains(base.domain.hi, 1e-12)) {
        throw InvalidArgument("pushforward_source: base domain exceeds the chart domain");
    }
    // Restrict the chart to the base domain so the support carries positive density.
    LipschitzChart restricted(chart.param_dim(), chart.ambient_dim(), base.domain,
                              [chart](const Vector& x) { return chart(x); });
    if (chart.has_analytic_jacobian()) {
        restricted.with_jacobian([chart](const Vector& x) { return *chart.analytic_jacobian(x); });
    }
    restricted.with_differential([chart](const Vector& x) { return chart.differential(x); })
        .with_lipschitz_bound(chart.lipschitz_bound())
        .with_label(chart.label());
    if (chart.has_inverse()) {
        restricted.with_inverse([chart](const Vector& p) {
            auto x = chart.locate(p, std::numeric_limits<double>::infinity());
            return x ? *x : chart.domain().center();
        });
    }

    Rng probe(0x5eed);
    int degenerate = 0;
    const int probes = 256;
    for (int i = 0; i < probes; ++i) {
        if (jacobian_determinant(restricted, base.sampler(probe)).degenerate) ++degenerate;
    }
    if (degenerate > probes / 4) {
        throw DegeneracyError("pushforward_source: chart Jacobian vanishes on a sampled set of positive measure");
    }

    auto jac = [restricted](const Vector& x) { return jacobian_determinant(restricted, x).value; };
    ChartDensityFn density = [pdf = base.pdf, jac](std::size_t, const Vector& x) {
        const double j = jac(x);
        return j > 0.0 ? pdf(x) / j : 0.0;
    };
    DrawFn draw = [sampler = base.sampler, restricted, density](Rng& rng) {
        const Vector x = sampler(rng);
        return Draw{restricted(x), density(0, x)};
    };
    if (name.empty()) name = base.name;
    return RectifiableSource(SupportAtlas({restricted}, chart.label()), std::move(density),
                             std::move(draw), std::move(name), analytic_entropy);
}

RectifiableSource symmetrized_pushforward(const ParamDensity& base, int m, std::string name,
                                          std::optional<double> analytic_entropy) {
    if (m < 1 || m > 3) throw UnsupportedError("symmetrized_pushforward: m must be 1, 2 or 3");
    if (base.domain.dim() != m) throw InvalidArgument("symmetrized_pushforward: base dimension differs from m");
    const double half_width = base.domain.hi.maxCoeff();
    if ((base.domain.lo + Vector::Constant(m, half_width)).cwiseAbs().maxCoeff() > 1e-12 ||
        (base.domain.hi - Vector::Constant(m, half_width)).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidArgument("symmetrized_pushforward: base domain must be a cube centred at 0");
    }
    const LipschitzChart chart = rank_one_chart(m, half_width);
    ChartDensityFn density = [pdf = base.pdf, chart](std::size_t, const Vector& z) {
        const double j = *chart.analytic_jacobian(z);
        return j > 0.0 ? (pdf(z) + pdf(-z)) / j : 0.0;
    };
    DrawFn draw = [sampler = base.sampler, chart, density](Rng& rng) {
        const Vector z = sampler(rng);
        return Draw{chart(z), density(0, z)};
    };
    if (name.empty()) name = "wishart1:" + base.name;
    return RectifiableSource(SupportAtlas({chart}, "wishart1"), std::move(density), std::move(draw),
                             std::move(name), analytic_entropy);
}

RectifiableSource circle_source(const ParamDensity& angle_pdf, std::string name) {
    const Box& d = angle_pdf.domain;
    if (d.dim() != 1 || d.lo[0] < -1e-12 || d.hi[0] > kTwoPi + 1e-12) {
        throw InvalidArgument("circle_source: angle density must live on [0, 2pi)");
    }
    if (name.empty()) name = "circle:" + angle_pdf.name;
    return pushforward_source(angle_pdf, circle_chart(), std::move(name), angle_pdf.entropy);
}

RectifiableSource product_source(const RectifiableSource& a, const RectifiableSource& b) {
    auto first = std::make_shared<const RectifiableSource>(a);
    auto second = std::make_shared<const RectifiableSource>(b);
    const std::size_t nb = b.support().pieces();
    const int ma = a.dim();
    const int mb = b.dim();
    ChartDensityFn density = [first, second, nb, ma, mb](std::size_t k, const Vector& x) {
        return first->chart_density(k / nb, x.head(ma)) * second->chart_density(k % nb, x.tail(mb));
    };
    DrawFn draw = [first, second](Rng& rng) {
        const Draw da = first->draw(rng);
        const Draw db = second->draw(rng);
        Vector p(da.point.size() + db.point.size());
        p << da.point, db.point;
        return Draw{p, da.density * db.density};
    };
    std::optional<double> entropy;
    if (a.analytic_entropy() && b.analytic_entropy()) {
        entropy = *a.analytic_entropy() + *b.analytic_entropy();
    }
    RectifiableSource out(product_support(a.support(), b.support()), std::move(density),
                          std::move(draw), "product:" + a.name() + "x" + b.name(), entropy);
    out.first_ = std::move(first);
    out.second_ = std::move(second);
    return out;
}

RectifiableSource discrete_source(std::vector<Vector> points, std::vector<double> probabilities,
                                  std::string name) {
    if (points.size() != probabilities.size()) {
        throw InvalidArgument("discrete_source: points and probabilities differ in length");
    }
    check_discrete_pmf(probabilities);
    DiscreteSupport support(points);
    std::vector<double> cumulative(probabilities.size());
    double acc = 0.0;
    double entropy = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        acc += probabilities[i];
        cumulative[i] = acc;
        entropy -= probabilities[i] * std::log(probabilities[i]);
    }
    ChartDensityFn density = [probabilities](std::size_t i, const Vector&) { return probabilities.at(i); };
    DrawFn draw = [points = std::move(points), probabilities, cumulative](Rng& rng) {
        const double u = rng.uniform() * cumulative.back();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        auto i = static_cast<std::size_t>(std::distance(cumulative.begin(), it));
        i = std::min(i, points.size() - 1);
        return Draw{points[i], probabilities[i]};
    };
    return RectifiableSource(SupportAtlas(std::move(support), "discrete"), std::move(density),
                             std::move(draw), name.empty() ? "discrete" : std::move(name), entropy);
}

RectifiableSource rotated_source(const RectifiableSource& source, const Matrix& u) {
    const int n = source.ambient_dim();
    if (u.rows() != n || u.cols() != n) throw InvalidArgument("rotated_source: matrix size mismatch");
    if ((u.transpose() * u - Matrix::Identity(n, n)).norm() > 1e-10) {
        throw InvalidArgument("rotated_source: matrix is not orthogonal");
    }
    auto base = std::make_shared<const RectifiableSource>(source);
    std::optional<SupportAtlas> atlas;
    if (source.support().is_discrete()) {
        std::vector<Vector> pts;
        for (const auto& p : source.support().discrete_points().points) pts.push_back(u * p);
        atlas.emplace(DiscreteSupport(std::move(pts)), source.support().name());
    } else {
        std::vector<LipschitzChart> charts;
        for (const auto& c : source.support().charts()) {
            LipschitzChart r(c.param_dim(), c.ambient_dim(), c.domain(),
                             [c, u](const Vector& x) { return Vector(u * c(x)); });
            if (c.has_analytic_jacobian()) {
                r.with_jacobian([c](const Vector& x) { return *c.analytic_jacobian(x); });
            }
            r.with_differential([c, u](const Vector& x) { return Matrix(u * c.differential(x)); })
                .with_lipschitz_bound(c.lipschitz_bound())
                .with_label(c.label());
            if (c.has_inverse()) {
                r.with_inverse([c, u](const Vector& p) {
                    auto x = c.locate(u.transpose() * p, std::numeric_limits<double>::infinity());
                    return x ? *x : c.domain().center();
                });
            }
            charts.push_back(std::move(r));
        }
        atlas.emplace(std::move(charts), source.support().name());
    }
    ChartDensityFn density = [base](std::size_t k, const Vector& x) { return base->chart_density(k, x); };
    DrawFn draw = [base, u](Rng& rng) {
        Draw d = base->draw(rng);
        d.point = u * d.point;
        return d;
    };
    return RectifiableSource(std::move(*atlas), std::move(density), std::move(draw),
                             "rotated:" + source.name(), source.analytic_entropy());
}

double rank_one_normal_entropy(int m) {
    if (m < 1) throw InvalidArgument("rank_one_normal_entropy: m must be positive");
    const double half_m = 0.5 * m;
    return (m - 0.5) * std::numbers::ln2 + half_m * std::log(std::numbers::pi) + half_m +
           half_m * (boost::math::digamma(half_m) + std::numbers::ln2);
}

SourceCheck check_source(const RectifiableSource& source, std::uint64_t seed, std::size_t samples,
                         const IntegrationOptions& opts) {
    SourceCheck out;
    out.normalization =
        integrate_over_support(source.support(),
                               [&](std::size_t k, const Vector& x) { return source.chart_density(k, x); },
                               opts)
            .value;
    out.min_sampled_density = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        const Draw d = source.draw(rng);
        const auto at = source.support().locate(d.point, 1e-6);
        if (!at) {
            out.max_support_distance = std::numeric_limits<double>::infinity();
            out.min_sampled_density = 0.0;
            continue;
        }
        out.max_support_distance =
            std::max(out.max_support_distance, (source.support().point(*at) - d.point).norm());
        out.min_sampled_density =
            std::min(out.min_sampled_density, source.chart_density(at->chart, at->param));
    }
    return out;
}

}  // namespace rectent
