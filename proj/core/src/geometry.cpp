#include "rectent/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "rectent/error.hpp"
#include "rectent/rng.hpp"

namespace rectent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fd_step(double x) { return std::max(1e-6, 1e-6 * std::abs(x)); }

// Gram determinant with a scale-relative singularity test.
JacobianValue gram_jacobian(const Matrix& d) {
    const Matrix g = d.transpose() * d;
    const int m = static_cast<int>(g.rows());
    const double scale = g.trace() / m;
    if (!(scale > 0.0)) return {0.0, true};
    const double det = (g / scale).determinant();
    if (!(det > 1e-14)) return {0.0, true};
    return {std::sqrt(det) * std::pow(scale, 0.5 * m), false};
}

}  // namespace

LipschitzChart::LipschitzChart(int param_dim, int ambient_dim, Box domain, MapFn map)
    : param_dim_(param_dim), ambient_dim_(ambient_dim), domain_(std::move(domain)),
      map_(std::move(map)) {
    if (param_dim_ < 1 || ambient_dim_ < param_dim_) {
        throw InvalidArgument("LipschitzChart: need 1 <= m <= M");
    }
    if (domain_.dim() != param_dim_) {
        throw InvalidArgument("LipschitzChart: domain dimension differs from m");
    }
    if (!map_) throw InvalidArgument("LipschitzChart: map is empty");
}

LipschitzChart& LipschitzChart::with_jacobian(std::function<double(const Vector&)> jacobian) {
    jacobian_ = std::move(jacobian);
    return *this;
}

LipschitzChart& LipschitzChart::with_differential(DifferentialFn differential) {
    differential_ = std::move(differential);
    return *this;
}

LipschitzChart& LipschitzChart::with_inverse(MapFn inverse) {
    inverse_ = std::move(inverse);
    return *this;
}

LipschitzChart& LipschitzChart::with_lipschitz_bound(double bound) {
    if (!(bound > 0.0)) throw InvalidArgument("LipschitzChart: Lipschitz bound must be positive");
    lipschitz_bound_ = bound;
    return *this;
}

LipschitzChart& LipschitzChart::with_label(std::string label) {
    label_ = std::move(label);
    return *this;
}

Vector LipschitzChart::operator()(const Vector& x) const {
    Vector y = map_(x);
    if (y.size() != ambient_dim_) throw Error("LipschitzChart: map returned wrong dimension");
    return y;
}

Matrix LipschitzChart::finite_difference_differential(const Vector& x) const {
    Matrix d(ambient_dim_, param_dim_);
    Vector xp = x;
    for (int j = 0; j < param_dim_; ++j) {
        const double h = fd_step(x[j]);
        xp[j] = x[j] + h;
        const Vector fp = (*this)(xp);
        xp[j] = x[j] - h;
        const Vector fm = (*this)(xp);
        xp[j] = x[j];
        d.col(j) = (fp - fm) / (2.0 * h);
    }
    return d;
}

Matrix LipschitzChart::differential(const Vector& x) const {
    if (differential_) return differential_(x);
    return finite_difference_differential(x);
}

std::optional<double> LipschitzChart::analytic_jacobian(const Vector& x) const {
    if (!jacobian_) return std::nullopt;
    return jacobian_(x);
}

std::optional<Vector> LipschitzChart::locate(const Vector& p, double tol) const {
    if (p.size() != ambient_dim_) return std::nullopt;
    const double slack = 1e-12 * (1.0 + domain_.hi.cwiseAbs().maxCoeff());
    auto accept = [&](const Vector& x) -> std::optional<Vector> {
        if (!domain_.contains(x, slack)) return std::nullopt;
        if (((*this)(x) - p).norm() > tol) return std::nullopt;
        return x;
    };
    if (inverse_) return accept(inverse_(p));

    // Grid seed followed by projected Gauss-Newton.
    const int per_axis = param_dim_ == 1 ? 256 : (param_dim_ == 2 ? 48 : 16);
    Vector best = domain_.center();
    double best_dist = ((*this)(best) - p).norm();
    Vector x(param_dim_);
    std::vector<int> idx(param_dim_, 0);
    while (true) {
        for (int j = 0; j < param_dim_; ++j) {
            x[j] = domain_.lo[j] + (idx[j] + 0.5) * (domain_.hi[j] - domain_.lo[j]) / per_axis;
        }
        const double dist = ((*this)(x) - p).norm();
        if (dist < best_dist) {
            best_dist = dist;
            best = x;
        }
        int j = 0;
        while (j < param_dim_ && ++idx[j] == per_axis) idx[j++] = 0;
        if (j == param_dim_) break;
    }
    for (int it = 0; it < 50; ++it) {
        const Vector r = (*this)(best) - p;
        const Matrix d = differential(best);
        const Vector step = d.colPivHouseholderQr().solve(r);
        Vector next = best - step;
        next = next.cwiseMax(domain_.lo).cwiseMin(domain_.hi);
        best = next;
        if (step.norm() < 1e-15 * (1.0 + best.norm())) break;
    }
    return accept(best);
}

DiscreteSupport::DiscreteSupport(std::vector<Vector> pts) : points(std::move(pts)) {
    if (points.empty()) throw InvalidArgument("DiscreteSupport: no points");
    const auto dim = points.front().size();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim) throw InvalidArgument("DiscreteSupport: mixed dimensions");
        for (std::size_t j = 0; j < i; ++j) {
            if (points[i] == points[j]) throw InvalidArgument("DiscreteSupport: repeated point");
        }
    }
}

SupportAtlas::SupportAtlas(std::vector<LipschitzChart> charts, std::string name)
    : charts_(std::move(charts)), name_(std::move(name)) {
    if (charts_.empty()) throw InvalidArgument("SupportAtlas: no charts");
    dim_ = charts_.front().param_dim();
    ambient_dim_ = charts_.front().ambient_dim();
    for (const auto& c : charts_) {
        if (c.param_dim() != dim_ || c.ambient_dim() != ambient_dim_) {
            throw InvalidArgument("SupportAtlas: charts disagree on dimensions");
        }
    }
}

SupportAtlas::SupportAtlas(DiscreteSupport points, std::string name)
    : dim_(0), ambient_dim_(points.ambient_dim()), discrete_(std::move(points)),
      name_(std::move(name)) {}

const DiscreteSupport& SupportAtlas::discrete_points() const {
    if (!discrete_) throw InvalidArgument("SupportAtlas: not a discrete support");
    return *discrete_;
}

std::size_t SupportAtlas::pieces() const {
    return discrete_ ? discrete_->points.size() : charts_.size();
}

double SupportAtlas::total_measure() const {
    if (!measure_) {
        const QuadResult r =
            integrate_over_support(*this, [](std::size_t, const Vector&) { return 1.0; });
        if (!(r.value > 0.0) || !std::isfinite(r.value)) {
            throw InvalidArgument("SupportAtlas: Hausdorff measure is not finite and positive");
        }
        measure_ = r.value;
    }
    return *measure_;
}

std::optional<ChartPoint> SupportAtlas::locate(const Vector& p, double tol) const {
    if (discrete_) {
        for (std::size_t i = 0; i < discrete_->points.size(); ++i) {
            if (p.size() == discrete_->points[i].size() && (p - discrete_->points[i]).norm() <= tol) {
                return ChartPoint{i, discrete_->points[i]};
            }
        }
        return std::nullopt;
    }
    for (std::size_t k = 0; k < charts_.size(); ++k) {
        if (auto x = charts_[k].locate(p, tol)) return ChartPoint{k, *x};
    }
    return std::nullopt;
}

Vector SupportAtlas::point(const ChartPoint& cp) const {
    if (discrete_) return discrete_->points.at(cp.chart);
    return charts_.at(cp.chart)(cp.param);
}

JacobianValue finite_difference_jacobian(const LipschitzChart& chart, const Vector& x) {
    if (!chart.domain().contains(x, 1e-12)) throw DomainError("jacobian: point outside chart domain");
    return gram_jacobian(chart.finite_difference_differential(x));
}

JacobianValue jacobian_determinant(const LipschitzChart& chart, const Vector& x) {
    if (!chart.domain().contains(x, 1e-12)) throw DomainError("jacobian: point outside chart domain");
    if (auto j = chart.analytic_jacobian(x)) {
        if (!(*j >= 0.0) || !std::isfinite(*j)) throw Error("jacobian: analytic Jacobian not finite");
        return {*j, *j <= 1e-12};
    }
    return gram_jacobian(chart.differential(x));
}

QuadResult integrate_over_support(const SupportAtlas& support, const ChartIntegrand& h,
                                  const IntegrationOptions& opts) {
    QuadResult total;
    total.converged = true;
    if (support.is_discrete()) {
        const auto& pts = support.discrete_points().points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double v = h(i, pts[i]);
            if (!std::isfinite(v)) throw Error("integrate_over_support: non-finite integrand");
            total.value += v;
        }
        total.evaluations = pts.size();
        return total;
    }
    const int m = support.dim();
    const double abs_tol = opts.abs_tol > 0.0 ? opts.abs_tol : (m == 1 ? 1e-8 : 1e-6);
    const auto& charts = support.charts();
    const double per_chart_tol = abs_tol / static_cast<double>(charts.size());
    for (std::size_t k = 0; k < charts.size(); ++k) {
        const LipschitzChart& chart = charts[k];
        auto weighted = [&](const Vector& x) {
            const double j = jacobian_determinant(chart, x).value;
            if (j == 0.0) return 0.0;
            return h(k, x) * j;
        };
        QuadResult r;
        if (m == 1) {
            QuadOptions q;
            q.abs_tol = per_chart_tol;
            q.rel_tol = opts.rel_tol;
            q.max_subdivisions = opts.max_subdivisions;
            q.initial_panels = opts.initial_panels;
            Vector x(1);
            r = integrate(
                [&](double t) {
                    x[0] = t;
                    return weighted(x);
                },
                chart.domain().lo[0], chart.domain().hi[0], q);
        } else {
            CubatureOptions c;
            c.abs_tol = per_chart_tol;
            c.rel_tol = opts.rel_tol;
            c.max_evaluations = opts.max_evaluations;
            c.initial_panels = std::max<std::size_t>(2, opts.initial_panels / 2);
            r = integrate_box(weighted, chart.domain(), c);
        }
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    }
    return total;
}

double hausdorff_integral(const SupportAtlas& support, const FieldFn& g,
                          const IntegrationOptions& opts) {
    return integrate_over_support(
               support, [&](std::size_t k, const Vector& x) {
                   return support.is_discrete() ? g(x) : g(support.charts()[k](x));
               },
               opts)
        .value;
}

namespace {

// Roots of r on [a, b): sign changes between scan nodes, plus root pairs hidden
// inside a cell where r turns back (found by locating the turning point).
std::vector<double> curve_roots(const ScalarFn& r, double a, double b, std::size_t cells,
                                double xtol) {
    const double h = (b - a) / static_cast<double>(cells);
    std::vector<double> t(cells + 1);
    std::vector<double> v(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        t[i] = i == cells ? b : a + h * static_cast<double>(i);
        v[i] = r(t[i]);
        if (!std::isfinite(v[i])) throw Error("non-finite residual during root scan");
    }
    std::vector<double> roots;
    for (std::size_t i = 0; i < cells; ++i) {
        if (v[i] == 0.0) {
            roots.push_back(t[i]);
        } else if (v[i] * v[i + 1] < 0.0) {
            roots.push_back(bisect_root(r, t[i], t[i + 1], xtol));
        }
    }
    for (std::size_t i = 1; i < cells; ++i) {
        const bool same_sign = v[i - 1] * v[i] > 0.0 && v[i] * v[i + 1] > 0.0;
        const bool turns = (v[i] - v[i - 1]) * (v[i + 1] - v[i]) < 0.0;
        if (!same_sign || !turns) continue;
        // Approach zero from the side of v[i]: minimise |r| on the two cells.
        const double sign = v[i] > 0.0 ? 1.0 : -1.0;
        const auto opt = golden_section_maximize([&](double x) { return -sign * r(x); }, t[i - 1],
                                                 t[i + 1], 1e-14 * (1.0 + std::abs(t[i])));
        if (opt.value <= 0.0) continue;
        roots.push_back(bisect_root(r, t[i - 1], opt.x, xtol));
        roots.push_back(bisect_root(r, opt.x, t[i + 1], xtol));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

void check_coords(const std::vector<int>& coords, int ambient) {
    if (coords.empty()) throw InvalidArgument("projection: empty coordinate set");
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] < 0 || coords[i] >= ambient) {
            throw InvalidArgument("projection: coordinate index out of range");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (coords[i] == coords[j]) throw InvalidArgument("projection: repeated coordinate");
        }
    }
}

}  // namespace

double projected_tangent_volume(const LipschitzChart& chart, const std::vector<int>& coords,
                                const Vector& param, int image_dim) {
    check_coords(coords, chart.ambient_dim());
    const Matrix d = chart.differential(param);
    const int m = chart.param_dim();
    const int k = static_cast<int>(coords.size());
    const int full = std::min(k, m);
    if (image_dim > full) throw InvalidArgument("projection: image dimension exceeds min(k, m)");
    if (image_dim == 0) return 1.0;
    if (m == 1) {
        const double norm = d.col(0).norm();
        if (!(norm > 1e-14)) throw DegeneracyError("projection: tangent undefined at point");
        double proj = 0.0;
        for (int c : coords) proj += d(c, 0) * d(c, 0);
        return std::sqrt(proj) / norm;
    }
    if (gram_jacobian(d).degenerate) throw DegeneracyError("projection: tangent undefined at point");
    const Eigen::HouseholderQR<Matrix> qr(d);
    const Matrix q = qr.householderQ() * Matrix::Identity(d.rows(), m);
    Matrix l(k, m);
    for (int i = 0; i < k; ++i) l.row(i) = q.row(coords[i]);
    if (image_dim > 0 && image_dim < full) {
        // Lower-dimensional image: volume factor of the top singular directions.
        const Eigen::JacobiSVD<Matrix> svd(l);
        double v = 1.0;
        for (int i = 0; i < image_dim; ++i) v *= svd.singularValues()[i];
        return v;
    }
    const double det = k <= m ? (l * l.transpose()).determinant() : (l.transpose() * l).determinant();
    return std::sqrt(std::max(det, 0.0));
}

JacobianValue tangential_projection_jacobian(const SupportAtlas& support,
                                             const std::vector<int>& coords,
                                             const ChartPoint& at, int image_dim) {
    if (support.is_discrete()) throw UnsupportedError("projection: discrete support has no tangent");
    const double j = projected_tangent_volume(support.charts().at(at.chart), coords, at.param, image_dim);
    if (j <= 1e-12) return {0.0, true};
    return {j, false};
}

JacobianValue tangential_projection_jacobian(const SupportAtlas& support,
                                             const std::vector<int>& coords, const Vector& p,
                                             int image_dim) {
    const auto at = support.locate(p, 1e-8);
    if (!at) throw DomainError("projection: point is not on the support");
    return tangential_projection_jacobian(support, coords, *at, image_dim);
}

FiberIntegral fiber_points(const SupportAtlas& support, const std::vector<int>& coords,
                           const Vector& y, const FiberOptions& opts) {
    if (support.is_discrete() || support.dim() != 1 || coords.size() != 1) {
        throw UnsupportedError("coarea: only curves projected to one coordinate are supported");
    }
    check_coords(coords, support.ambient_dim());
    if (y.size() != 1) throw InvalidArgument("coarea: y must have one component");
    const int c = coords[0];
    const double target = y[0];

    FiberIntegral out;
    const auto& charts = support.charts();
    for (std::size_t k = 0; k < charts.size(); ++k) {
        const LipschitzChart& chart = charts[k];
        Vector x(1);
        auto residual = [&](double t) {
            x[0] = t;
            return chart(x)[c] - target;
        };
        std::vector<double> roots;
        try {
            roots = curve_roots(residual, chart.domain().lo[0], chart.domain().hi[0],
                                opts.scan_cells, opts.param_tol);
        } catch (const Error& e) {
            throw Error("coarea: root finding failed on chart " + std::to_string(k) +
                        (chart.label().empty() ? "" : " (" + chart.label() + ")") + ": " + e.what());
        }
        for (double t : roots) {
            ChartPoint cp{k, Vector::Constant(1, t)};
            const auto jv = tangential_projection_jacobian(support, coords, cp);
            if (jv.degenerate || jv.value <= opts.degeneracy_threshold) {
                std::ostringstream msg;
                msg.precision(12);
                msg << "coarea: dropped degenerate fiber point on chart " << k << " at t=" << t;
                out.warnings.push_back(msg.str());
                continue;
            }
            out.points.push_back({cp, chart(cp.param), jv.value});
        }
    }
    return out;
}

FiberIntegral coarea_fiber_integral(const SupportAtlas& support, const std::vector<int>& coords,
                                    const Vector& y, const FieldFn& g, const FiberOptions& opts) {
    FiberIntegral out = fiber_points(support, coords, y, opts);
    for (const auto& fp : out.points) out.value += g(fp.point) / fp.projection_jacobian;
    return out;
}

bool check_injective(const LipschitzChart& chart, std::size_t pairs, std::uint64_t seed,
                     double tol) {
    Rng rng(seed);
    const Box& dom = chart.domain();
    auto draw = [&] {
        Vector x(dom.dim());
        for (int j = 0; j < dom.dim(); ++j) x[j] = rng.uniform(dom.lo[j], dom.hi[j]);
        return x;
    };
    const double separation = 1e-6 * (1.0 + (dom.hi - dom.lo).norm());
    for (std::size_t i = 0; i < pairs; ++i) {
        const Vector a = draw();
        const Vector p = chart(a);
        // Pull a second random parameter onto p by Gauss-Newton; landing away
        // from a means p has two preimages.
        Vector b = draw();
        for (int it = 0; it < 30; ++it) {
            const Vector r = chart(b) - p;
            if (r.norm() <= 0.1 * tol) break;
            const Matrix d = chart.differential(b);
            const Vector step = d.colPivHouseholderQr().solve(r);
            b = (b - step).cwiseMax(dom.lo).cwiseMin(dom.hi);
        }
        if ((a - b).norm() > separation && (chart(b) - p).norm() <= tol) return false;
    }
    return true;
}

bool check_disjoint(const SupportAtlas& support, std::size_t samples_per_chart,
                    std::uint64_t seed, double tol) {
    if (support.is_discrete()) return true;
    const auto& charts = support.charts();
    Rng rng(seed);
    for (std::size_t k = 0; k < charts.size(); ++k) {
        const Box& dom = charts[k].domain();
        for (std::size_t i = 0; i < samples_per_chart; ++i) {
            Vector x(dom.dim());
            for (int j = 0; j < dom.dim(); ++j) x[j] = rng.uniform(dom.lo[j], dom.hi[j]);
            const Vector p = charts[k](x);
            for (std::size_t other = 0; other < charts.size(); ++other) {
                if (other == k) continue;
                // Shared chart boundaries are null sets; only interior hits count.
                if (auto hit = charts[other].locate(p, tol)) {
                    const Box& od = charts[other].domain();
                    if (od.contains(*hit, -1e-9)) return false;
                }
            }
        }
    }
    return true;
}

LipschitzChart circle_chart(double lo, double hi) {
    if (!(hi - lo <= kTwoPi + 1e-12)) throw InvalidArgument("circle_chart: arc longer than the circle");
    LipschitzChart chart(1, 2, Box::interval(lo, hi), [](const Vector& t) {
        Vector p(2);
        p << std::cos(t[0]), std::sin(t[0]);
        return p;
    });
    chart.with_jacobian([](const Vector&) { return 1.0; })
        .with_differential([](const Vector& t) {
            Matrix d(2, 1);
            d << -std::sin(t[0]), std::cos(t[0]);
            return d;
        })
        .with_inverse([lo](const Vector& p) {
            double t = std::atan2(p[1], p[0]);
            t = lo + std::fmod(std::fmod(t - lo, kTwoPi) + kTwoPi, kTwoPi);
            return Vector::Constant(1, t);
        })
        .with_lipschitz_bound(1.0)
        .with_label("circle");
    return chart;
}

LipschitzChart embedding_chart(int m, int ambient, double half_width) {
    if (m < 1 || ambient < m) throw InvalidArgument("embedding_chart: need 1 <= m <= M");
    LipschitzChart chart(m, ambient, Box::cube(m, -half_width, half_width), [m, ambient](const Vector& x) {
        Vector p = Vector::Zero(ambient);
        p.head(m) = x;
        return p;
    });
    chart.with_jacobian([](const Vector&) { return 1.0; })
        .with_differential([m, ambient](const Vector&) {
            Matrix d = Matrix::Zero(ambient, m);
            d.topRows(m).setIdentity();
            return d;
        })
        .with_inverse([m](const Vector& p) { return Vector(p.head(m)); })
        .with_lipschitz_bound(1.0)
        .with_label("embedding");
    return chart;
}

LipschitzChart rank_one_chart(int m, double half_width) {
    if (m < 1) throw InvalidArgument("rank_one_chart: m must be positive");
    Vector lo = Vector::Constant(m, -half_width);
    Vector hi = Vector::Constant(m, half_width);
    lo[0] = 0.0;
    LipschitzChart chart(m, m * m, Box(lo, hi), [m](const Vector& z) {
        Vector p(m * m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) p[i * m + j] = z[i] * z[j];
        }
        return p;
    });
    chart
        .with_jacobian([m](const Vector& z) {
            return std::pow(2.0, 0.5 * (m + 1)) * std::pow(z.norm(), m);
        })
        .with_differential([m](const Vector& z) {
            Matrix d = Matrix::Zero(m * m, m);
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    d(i * m + j, i) += z[j];
                    d(i * m + j, j) += z[i];
                }
            }
            return d;
        })
        .with_inverse([m](const Vector& p) {
            // Largest diagonal entry fixes the most accurate column of z z^T.
            int r = 0;
            for (int i = 1; i < m; ++i) {
                if (p[i * m + i] > p[r * m + r]) r = i;
            }
            Vector z = Vector::Zero(m);
            const double zr = std::sqrt(std::max(p[r * m + r], 0.0));
            if (zr == 0.0) return z;
            for (int i = 0; i < m; ++i) z[i] = p[i * m + r] / zr;
            if (z[0] < 0.0) z = -z;
            return z;
        })
        .with_lipschitz_bound(2.0 * half_width * std::sqrt(static_cast<double>(m)))
        .with_label("wishart1");
    return chart;
}

LipschitzChart product_chart(const LipschitzChart& a, const LipschitzChart& b) {
    const int ma = a.param_dim();
    const int mb = b.param_dim();
    const int na = a.ambient_dim();
    const int nb = b.ambient_dim();
    LipschitzChart chart(ma + mb, na + nb, Box::product(a.domain(), b.domain()),
                         [a, b, ma, mb, na, nb](const Vector& x) {
                             Vector p(na + nb);
                             p << a(x.head(ma)), b(x.tail(mb));
                             return p;
                         });
    if (a.has_analytic_jacobian() && b.has_analytic_jacobian()) {
        chart.with_jacobian([a, b, ma, mb](const Vector& x) {
            return *a.analytic_jacobian(x.head(ma)) * *b.analytic_jacobian(x.tail(mb));
        });
    }
    chart.with_differential([a, b, ma, mb, na, nb](const Vector& x) {
        Matrix d = Matrix::Zero(na + nb, ma + mb);
        d.topLeftCorner(na, ma) = a.differential(x.head(ma));
        d.bottomRightCorner(nb, mb) = b.differential(x.tail(mb));
        return d;
    });
    if (a.has_inverse() && b.has_inverse()) {
        chart.with_inverse([a, b, ma, mb, na, nb](const Vector& p) {
            Vector x(ma + mb);
            const auto xa = a.locate(p.head(na), 1e300);
            const auto xb = b.locate(p.tail(nb), 1e300);
            x << (xa ? *xa : a.domain().center()), (xb ? *xb : b.domain().center());
            return x;
        });
    }
    chart.with_lipschitz_bound(std::max(a.lipschitz_bound(), b.lipschitz_bound()))
        .with_label(a.label() + "x" + b.label());
    return chart;
}

SupportAtlas unit_circle_support() { return SupportAtlas({circle_chart()}, "circle"); }

SupportAtlas embedding_support(int m, int ambient, double half_width) {
    return SupportAtlas({embedding_chart(m, ambient, half_width)}, "embedding");
}

SupportAtlas rank_one_support(int m, double half_width) {
    return SupportAtlas({rank_one_chart(m, half_width)}, "wishart1");
}

SupportAtlas product_support(const SupportAtlas& a, const SupportAtlas& b) {
    if (a.is_discrete() || b.is_discrete()) {
        throw UnsupportedError("product_support: discrete factors are not supported");
    }
    std::vector<LipschitzChart> charts;
    for (const auto& ca : a.charts()) {
        for (const auto& cb : b.charts()) charts.push_back(product_chart(ca, cb));
    }
    return SupportAtlas(std::move(charts), a.name() + "x" + b.name());
}

SupportAtlas support_by_name(const std::string& name) {
    std::vector<std::string> parts;
    std::stringstream ss(name);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw CatalogError("unknown support '" + name + "'");
        }
        if (used != s.size()) throw CatalogError("unknown support '" + name + "'");
        return v;
    };
    if (parts.size() == 1 && parts[0] == "circle") return unit_circle_support();
    if (parts.size() == 3 && parts[0] == "embedding") {
        const int m = to_int(parts[1]);
        const int ambient = to_int(parts[2]);
        if (m < 1 || ambient < m || m > 3) throw CatalogError("embedding: need 1 <= m <= 3, m <= M");
        return embedding_support(m, ambient);
    }
    if (parts.size() == 2 && parts[0] == "wishart1") {
        const int m = to_int(parts[1]);
        if (m < 1 || m > 3) throw CatalogError("wishart1: m must be 1, 2 or 3");
        return rank_one_support(m);
    }
    throw CatalogError("unknown support '" + name + "'");
}

}  // namespace rectent
