#include "rectent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "rectent/error.hpp"

namespace rectent {

namespace {

constexpr double kDensityFloor = 1e-300;

double safe_log(double v) { return std::log(std::max(v, kDensityFloor)); }

bool is_range(const std::vector<int>& coords, int first, int count) {
    if (static_cast<int>(coords.size()) != count) return false;
    for (int i = 0; i < count; ++i) {
        if (coords[i] != first + i) return false;
    }
    return true;
}

void check_coords(const RectifiableSource& joint, const std::vector<int>& coords) {
    if (coords.empty()) throw InvalidArgument("projection: empty coordinate set");
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] < 0 || coords[i] >= joint.ambient_dim()) {
            throw InvalidArgument("projection: coordinate index out of range");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (coords[i] == coords[j]) throw InvalidArgument("projection: repeated coordinate");
        }
    }
}

Vector project(const Vector& p, const std::vector<int>& coords) {
    Vector y(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) y[static_cast<Eigen::Index>(i)] = p[coords[i]];
    return y;
}

// Which factor of a product source a coordinate block selects, if any.
const RectifiableSource* factor_for(const RectifiableSource& joint, const std::vector<int>& coords) {
    const auto& a = joint.first_factor();
    const auto& b = joint.second_factor();
    if (!a || !b) return nullptr;
    if (is_range(coords, 0, a->ambient_dim())) return a.get();
    if (is_range(coords, a->ambient_dim(), b->ambient_dim())) return b.get();
    return nullptr;
}

bool is_identity(const RectifiableSource& joint, const std::vector<int>& coords) {
    return is_range(coords, 0, joint.ambient_dim());
}

// A single chart with m = M that maps every parameter to itself.
bool is_full_dimensional(const RectifiableSource& joint) {
    const SupportAtlas& s = joint.support();
    if (s.is_discrete() || s.dim() != s.ambient_dim() || s.charts().size() != 1) return false;
    const LipschitzChart& c = s.charts().front();
    const Box& d = c.domain();
    for (double t : {0.25, 0.5, 0.75}) {
        const Vector x = d.lo + t * (d.hi - d.lo);
        if ((c(x) - x).norm() > 1e-14 * (1.0 + x.norm())) return false;
    }
    return true;
}

EntropyEstimate quadrature_estimate(double value) {
    return EntropyEstimate{value, EntropyMethod::quadrature, 0.0, 0};
}

QuadResult integrate_named(const RectifiableSource& source, const ChartIntegrand& h,
                           const IntegrationOptions& opts, const char* what) {
    try {
        return integrate_over_support(source.support(), h, opts);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(what) + " of '" + source.name() + "' did not converge",
                               e.best_estimate(), e.residual());
    } catch (const DegeneracyError&) {
        throw;
    } catch (const Error& e) {
        throw Error(std::string(what) + " of '" + source.name() + "': " + e.what());
    }
}

}  // namespace

std::string to_string(EntropyMethod method) {
    switch (method) {
        case EntropyMethod::analytic:
            return "analytic";
        case EntropyMethod::quadrature:
            return "quadrature";
        case EntropyMethod::monte_carlo:
            return "monte_carlo";
    }
    return "unknown";
}

EntropyEstimate entropy_quadrature(const RectifiableSource& source, const IntegrationOptions& opts) {
    const QuadResult r = integrate_named(
        source,
        [&](std::size_t k, const Vector& x) {
            const double theta = source.chart_density(k, x);
            return theta > 0.0 ? -theta * safe_log(theta) : 0.0;
        },
        opts, "entropy quadrature");
    return quadrature_estimate(r.value);
}

EntropyEstimate entropy_monte_carlo(const RectifiableSource& source, std::uint64_t seed,
                                    std::size_t n) {
    if (n < 100) throw InvalidArgument("entropy_monte_carlo: need at least 100 samples");
    Rng rng(seed);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = -safe_log(source.draw(rng).density);
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    const double sd = std::sqrt(m2 / static_cast<double>(n - 1));
    return EntropyEstimate{mean, EntropyMethod::monte_carlo, sd / std::sqrt(static_cast<double>(n)), n};
}

EntropyEstimate entropy_analytic(const RectifiableSource& source) {
    const auto h = source.analytic_entropy();
    if (!h) throw UnsupportedError("source '" + source.name() + "' has no closed-form entropy");
    return EntropyEstimate{*h, EntropyMethod::analytic, 0.0, 0};
}

EntropyEstimate entropy_reference(const RectifiableSource& source, const IntegrationOptions& opts) {
    if (source.analytic_entropy()) return entropy_analytic(source);
    return entropy_quadrature(source, opts);
}

double entropy_transformed(double base_entropy, double expected_log_jacobian) {
    if (!std::isfinite(base_entropy) || !std::isfinite(expected_log_jacobian)) {
        throw InvalidArgument("entropy_transformed: inputs must be finite");
    }
    return base_entropy + expected_log_jacobian;
}

MarginalDensity::MarginalDensity(const RectifiableSource& joint_in, std::vector<int> coords) {
    check_coords(joint_in, coords);
    auto joint = std::make_shared<const RectifiableSource>(joint_in);
    joint_ = joint;
    coords_ = coords;
    const SupportAtlas& support = joint->support();

    if (const RectifiableSource* factor = factor_for(*joint, coords)) {
        dim_ = factor->dim();
        eval_ = [joint, factor](const Vector& y) {
            FiberIntegral out;
            out.value = factor->density(y).value;
            return out;
        };
        return;
    }
    if (is_identity(*joint, coords)) {
        dim_ = joint->dim();
        eval_ = [joint](const Vector& y) {
            FiberIntegral out;
            out.value = joint->density(y).value;
            return out;
        };
        return;
    }
    if (support.is_discrete()) {
        dim_ = 0;
        eval_ = [joint, coords](const Vector& y) {
            FiberIntegral out;
            const auto& pts = joint->support().discrete_points().points;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (project(pts[i], coords) == y) out.value += joint->chart_density(i, pts[i]);
            }
            return out;
        };
        return;
    }
    if (support.dim() == 1 && coords.size() == 1) {
        dim_ = 1;
        curve_ = true;
        eval_ = [joint, coords](const Vector& y) {
            FiberIntegral out = fiber_points(joint->support(), coords, y);
            for (const auto& fp : out.points) {
                out.value += joint->chart_density(fp.where.chart, fp.where.param) / fp.projection_jacobian;
            }
            return out;
        };
        return;
    }
    if (is_full_dimensional(*joint) && coords.size() < static_cast<std::size_t>(support.dim())) {
        dim_ = static_cast<int>(coords.size());
        std::vector<int> rest;
        for (int j = 0; j < support.dim(); ++j) {
            if (std::find(coords.begin(), coords.end(), j) == coords.end()) rest.push_back(j);
        }
        eval_ = [joint, coords, rest](const Vector& y) {
            FiberIntegral out;
            const Box& dom = joint->support().charts().front().domain();
            Vector x(dom.dim());
            for (std::size_t i = 0; i < coords.size(); ++i) {
                const int c = coords[i];
                if (y[static_cast<Eigen::Index>(i)] < dom.lo[c] || y[static_cast<Eigen::Index>(i)] > dom.hi[c]) {
                    return out;
                }
                x[c] = y[static_cast<Eigen::Index>(i)];
            }
            Vector lo(static_cast<Eigen::Index>(rest.size()));
            Vector hi(static_cast<Eigen::Index>(rest.size()));
            for (std::size_t i = 0; i < rest.size(); ++i) {
                lo[static_cast<Eigen::Index>(i)] = dom.lo[rest[i]];
                hi[static_cast<Eigen::Index>(i)] = dom.hi[rest[i]];
            }
            auto inner = [&](const Vector& t) {
                for (std::size_t i = 0; i < rest.size(); ++i) x[rest[i]] = t[static_cast<Eigen::Index>(i)];
                return joint->chart_density(0, x);
            };
            if (rest.size() == 1) {
                QuadOptions q;
                q.abs_tol = 1e-13;
                q.rel_tol = 1e-12;
                q.initial_panels = 8;
                Vector t(1);
                out.value = integrate(
                                [&](double s) {
                                    t[0] = s;
                                    return inner(t);
                                },
                                lo[0], hi[0], q)
                                .value;
            } else {
                CubatureOptions c;
                c.abs_tol = 1e-10;
                out.value = integrate_box(inner, Box(lo, hi), c).value;
            }
            return out;
        };
        return;
    }
    throw UnsupportedError("marginal density of '" + joint->name() +
                           "' onto the requested coordinates is not supported");
}

double MarginalDensity::operator()(const Vector& y) const { return eval_(y).value; }

FiberIntegral MarginalDensity::evaluate(const Vector& y) const { return eval_(y); }

double MarginalDensity::at_support_point(std::size_t chart, const Vector& param) const {
    const Vector y = project(joint_->support().point({chart, param}), coords_);
    if (!curve_) return eval_(y).value;
    const LipschitzChart& c = joint_->support().charts()[chart];
    const double own_j = projected_tangent_volume(c, coords_, param);
    double value = own_j > 0.0 ? joint_->chart_density(chart, param) / own_j : 0.0;
    // The fiber point nearest to the query (and close enough) is the query itself.
    const auto fiber = fiber_points(joint_->support(), coords_, y).points;
    std::size_t self = fiber.size();
    double best = 1e-6 * (c.domain().hi[0] - c.domain().lo[0]);
    for (std::size_t i = 0; i < fiber.size(); ++i) {
        const double gap = std::abs(fiber[i].where.param[0] - param[0]);
        if (fiber[i].where.chart == chart && gap < best) {
            best = gap;
            self = i;
        }
    }
    for (std::size_t i = 0; i < fiber.size(); ++i) {
        if (i == self) continue;
        value += joint_->chart_density(fiber[i].where.chart, fiber[i].where.param) /
                 fiber[i].projection_jacobian;
    }
    return value;
}

EntropyEstimate marginal_entropy(const RectifiableSource& joint, const std::vector<int>& coords,
                                 const IntegrationOptions& opts) {
    check_coords(joint, coords);
    if (const RectifiableSource* factor = factor_for(joint, coords)) {
        return entropy_quadrature(*factor, opts);
    }
    if (is_identity(joint, coords)) return entropy_quadrature(joint, opts);
    const MarginalDensity marginal(joint, coords);
    const QuadResult r = integrate_named(
        joint,
        [&](std::size_t k, const Vector& x) {
            const double theta = joint.chart_density(k, x);
            if (!(theta > 0.0)) return 0.0;
            return -theta * safe_log(marginal.at_support_point(k, x));
        },
        opts, "marginal entropy");
    return quadrature_estimate(r.value);
}

EntropyEstimate jacobian_correction(const RectifiableSource& joint, const std::vector<int>& coords,
                                    const IntegrationOptions& opts) {
    check_coords(joint, coords);
    if (is_identity(joint, coords) || joint.support().is_discrete()) return quadrature_estimate(0.0);
    const auto& charts = joint.support().charts();
    const int image_dim = MarginalDensity(joint, coords).dim();
    const QuadResult r = integrate_named(
        joint,
        [&](std::size_t k, const Vector& x) {
            const double theta = joint.chart_density(k, x);
            if (!(theta > 0.0)) return 0.0;
            return theta * safe_log(projected_tangent_volume(charts[k], coords, x, image_dim));
        },
        opts, "Jacobian correction");
    return quadrature_estimate(r.value);
}

EntropyEstimate conditional_entropy(const RectifiableSource& joint, const std::vector<int>& coords,
                                    const IntegrationOptions& opts) {
    check_coords(joint, coords);
    const MarginalDensity marginal(joint, coords);
    const SupportAtlas& support = joint.support();
    const bool identity = is_identity(joint, coords) || support.is_discrete();
    const QuadResult r = integrate_named(
        joint,
        [&](std::size_t k, const Vector& x) {
            const double theta = joint.chart_density(k, x);
            if (!(theta > 0.0)) return 0.0;
            const double log_y = safe_log(marginal.at_support_point(k, x));
            const double log_j =
                identity ? 0.0
                         : safe_log(projected_tangent_volume(support.charts()[k], coords, x, marginal.dim()));
            return theta * (-safe_log(theta) + log_y + log_j);
        },
        opts, "conditional entropy");
    return quadrature_estimate(r.value);
}

JointDecomposition chain_decomposition(const RectifiableSource& joint,
                                       const std::vector<int>& coords,
                                       const IntegrationOptions& opts) {
    JointDecomposition d;
    d.joint = entropy_quadrature(joint, opts);
    d.marginal_y = marginal_entropy(joint, coords, opts);
    d.conditional_x_given_y = conditional_entropy(joint, coords, opts);
    d.jacobian_correction = jacobian_correction(joint, coords, opts);
    return d;
}

MutualInformation mutual_information(const RectifiableSource& x, const RectifiableSource& y,
                                     const RectifiableSource* joint, EntropyMethod method,
                                     const IntegrationOptions& opts) {
    if (method == EntropyMethod::monte_carlo) {
        throw InvalidArgument("mutual_information: use analytic or quadrature entropies");
    }
    auto entropy_of = [&](const RectifiableSource& s) {
        return method == EntropyMethod::analytic ? entropy_analytic(s).value
                                                 : entropy_quadrature(s, opts).value;
    };
    std::optional<RectifiableSource> product;
    if (joint == nullptr) {
        product.emplace(product_source(x, y));
        joint = &*product;
    }
    if (joint->ambient_dim() != x.ambient_dim() + y.ambient_dim()) {
        throw InvalidArgument("mutual_information: joint ambient dimension must be M1 + M2");
    }
    if (joint->dim() > x.dim() + y.dim()) {
        throw InvalidArgument("mutual_information: joint dimension exceeds m1 + m2");
    }
    if (joint->dim() < x.dim() + y.dim()) return MutualInformation{0.0, true};
    return MutualInformation{entropy_of(x) + entropy_of(y) - entropy_of(*joint), false};
}

}  // namespace rectent
