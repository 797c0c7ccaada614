#include "rectent/ratedistortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rectent/error.hpp"
#include "rectent/rng.hpp"

namespace rectent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

QuadOptions inner_options(double abs_tol) {
    QuadOptions q;
    q.abs_tol = abs_tol;
    q.rel_tol = 1e-12;
    q.max_subdivisions = 4000;
    q.initial_panels = 4;
    return q;
}

// 1 - cos(phi) without cancellation.
double one_minus_cos(double phi) {
    const double h = std::sin(0.5 * phi);
    return 2.0 * h * h;
}

// int_0^{2 pi} g(phi) exp(-2 s y1 (1 - cos phi)) dphi, folded onto [0, pi].
double circle_moment(double s, double y1, double abs_tol, const ScalarFn& g) {
    const double a = 2.0 * s * y1;
    return 2.0 * integrate([&](double phi) { return g(phi) * std::exp(-a * one_minus_cos(phi)); }, 0.0,
                           std::numbers::pi, inner_options(0.5 * abs_tol))
                     .value;
}

struct CircleProfile {
    double s;
    double abs_tol;

    double weight_integral(double y1) const {
        return circle_moment(s, y1, abs_tol, [](double) { return 1.0; });
    }
    double log_value(double y1) const {
        const double r = 1.0 - y1;
        return -s * r * r + std::log(weight_integral(y1));
    }
    // int (cos phi - y1) w dphi / y1, continuous at y1 = 0 with value 2 pi (s - 1).
    double stationarity(double y1) const {
        if (y1 == 0.0) return kTwoPi * (s - 1.0);
        const double g = circle_moment(s, y1, abs_tol * 1e-3, [&](double phi) { return std::cos(phi) - y1; });
        return g / y1;
    }
    double mean_distortion(double y1) const {
        const double r = 1.0 - y1;
        const double num = circle_moment(s, y1, abs_tol,
                                         [&](double phi) { return r * r + 2.0 * y1 * one_minus_cos(phi); });
        return num / weight_integral(y1);
    }
};

GammaPoint circle_gamma(double s, const GammaOptions& opts) {
    const CircleProfile f{s, opts.inner_abs_tol};
    GammaPoint out;
    out.s = s;

    std::vector<double> candidates = {0.0, 1.0};
    const std::size_t cells = std::max<std::size_t>(opts.scan_cells, 2);
    std::vector<double> nodes(cells + 1);
    std::vector<double> values(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        nodes[i] = static_cast<double>(i) / static_cast<double>(cells);
        values[i] = f.stationarity(nodes[i]);
    }
    bool bracket_failed = false;
    for (std::size_t i = 0; i < cells; ++i) {
        if (values[i] == 0.0 && i > 0) candidates.push_back(nodes[i]);
        if (values[i] * values[i + 1] < 0.0) {
            try {
                candidates.push_back(bisect_root([&](double y) { return f.stationarity(y); }, nodes[i],
                                                 nodes[i + 1], opts.root_tol));
            } catch (const Error&) {
                bracket_failed = true;
            }
        }
    }
    if (bracket_failed) {
        const ScalarOptimum g = golden_section_maximize([&](double y) { return f.log_value(y); }, 0.0, 1.0, 1e-10);
        candidates.push_back(g.x);
        out.warnings.push_back("gamma: stationary-point bisection failed at s = " + std::to_string(s) +
                               "; used golden-section search");
    }

    double best_y = 0.0;
    double best = f.log_value(0.0);
    for (double y : candidates) {
        if (y == 0.0) continue;
        const double v = f.log_value(y);
        // y1 = 0 wins ties.
        if (v > best + 1e-14 * std::max(1.0, std::abs(best))) {
            best = v;
            best_y = y;
        }
    }
    out.y_star = Vector::Zero(2);
    out.y_star[0] = best_y;
    out.log_gamma = best;
    out.gamma = std::exp(best);
    out.d_star = f.mean_distortion(best_y);
    return out;
}

// Generic path: maximize log int exp(-s d(x, y)) dH^m over y.
GammaPoint generic_gamma(const SupportAtlas& support, const Distortion& distortion, double s,
                         const GammaOptions& opts) {
    if (support.is_discrete()) throw UnsupportedError("gamma: discrete supports are not supported");
    const int M = support.ambient_dim();
    IntegrationOptions io;
    io.abs_tol = opts.inner_abs_tol;
    auto log_f = [&](const Vector& y) {
        const double v = hausdorff_integral(support, [&](const Vector& x) {
            return std::exp(-s * distortion.d(x, y));
        }, io);
        return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
    };

    // Bounding box of the support from a parameter grid.
    Vector lo = Vector::Constant(M, std::numeric_limits<double>::infinity());
    Vector hi = -lo;
    for (const auto& chart : support.charts()) {
        const Box& d = chart.domain();
        const int m = static_cast<int>(d.dim());
        const std::size_t per_axis = m == 1 ? 257 : (m == 2 ? 33 : 9);
        std::vector<std::size_t> idx(m, 0);
        while (true) {
            Vector x(m);
            for (int i = 0; i < m; ++i) {
                x[i] = d.lo[i] + (d.hi[i] - d.lo[i]) * static_cast<double>(idx[i]) /
                                     static_cast<double>(per_axis - 1);
            }
            const Vector p = chart(x);
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
            int a = 0;
            while (a < m && ++idx[a] == per_axis) idx[a++] = 0;
            if (a == m) break;
        }
    }

    GammaPoint out;
    out.s = s;
    Vector best_y = 0.5 * (lo + hi);
    double best = log_f(best_y);
    if (M <= 3) {
        const std::size_t per_axis = M == 1 ? 41 : (M == 2 ? 21 : 11);
        std::vector<std::size_t> idx(M, 0);
        while (true) {
            Vector y(M);
            for (int i = 0; i < M; ++i) {
                y[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx[i]) / static_cast<double>(per_axis - 1);
            }
            const double v = log_f(y);
            if (v > best) {
                best = v;
                best_y = y;
            }
            int a = 0;
            while (a < M && ++idx[a] == per_axis) idx[a++] = 0;
            if (a == M) break;
        }
    } else {
        out.warnings.push_back("gamma: ambient dimension above 3, compass search from the box centre only");
    }

    double step = 0.0;
    for (int i = 0; i < M; ++i) step = std::max(step, hi[i] - lo[i]);
    step = std::max(step, 1.0) / 20.0;
    while (step > 1e-8) {
        bool moved = false;
        for (int i = 0; i < M && !moved; ++i) {
            for (double dir : {1.0, -1.0}) {
                Vector y = best_y;
                y[i] += dir * step;
                const double v = log_f(y);
                if (v > best + 1e-15 * std::abs(best)) {
                    best = v;
                    best_y = y;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) step *= 0.5;
    }

    out.y_star = best_y;
    out.log_gamma = best;
    out.gamma = std::exp(best);
    const double den = std::exp(best);
    const double num = hausdorff_integral(support, [&](const Vector& x) {
        const double dd = distortion.d(x, best_y);
        return dd * std::exp(-s * dd);
    }, io);
    out.d_star = num / den;
    return out;
}

bool is_unit_circle(const SupportAtlas& support) {
    return support.name() == "circle" && !support.is_discrete() && support.dim() == 1 &&
           support.ambient_dim() == 2 && support.charts().size() == 1;
}

// 1 - sin(x) / x, accurate for small x.
double one_minus_sinc(double x) {
    if (x < 1e-2) {
        const double x2 = x * x;
        return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    }
    return 1.0 - std::sin(x) / x;
}

}  // namespace

Distortion squared_error() {
    return Distortion{"squared_error", [](const Vector& x, const Vector& y) { return (x - y).squaredNorm(); },
                      true};
}

double circle_log_profile(double s, double y1, double abs_tol) {
    return CircleProfile{s, abs_tol}.log_value(y1);
}

GammaPoint gamma_of_s(const SupportAtlas& support, const Distortion& distortion, double s,
                      const GammaOptions& opts) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("gamma: s must be finite and nonnegative");
    if (distortion.squared_error && is_unit_circle(support)) return circle_gamma(s, opts);
    return generic_gamma(support, distortion, s, opts);
}

double slb(double entropy, double D, double s, double gamma) {
    if (!(gamma > 0.0)) throw InvalidArgument("slb: gamma must be positive");
    return entropy - s * D - std::log(gamma);
}

double slb(double entropy, double D, const GammaPoint& g) { return entropy - g.s * D - g.log_gamma; }

std::vector<SlbSweepPoint> slb_sweep(double entropy, double D, const SupportAtlas& support,
                                     const Distortion& distortion, const std::vector<double>& s_grid,
                                     const GammaOptions& opts) {
    std::vector<SlbSweepPoint> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) out.push_back({s, slb(entropy, D, gamma_of_s(support, distortion, s, opts))});
    return out;
}

SlbSweepPoint maximize_slb(double entropy, double D, const SupportAtlas& support,
                           const Distortion& distortion, double s_lo, double s_hi,
                           const GammaOptions& opts) {
    if (!(s_hi > s_lo) || !(s_lo >= 0.0)) throw InvalidArgument("maximize_slb: need 0 <= s_lo < s_hi");
    auto R = [&](double s) { return slb(entropy, D, gamma_of_s(support, distortion, s, opts)); };
    const std::size_t points = std::clamp<std::size_t>(static_cast<std::size_t>(s_hi - s_lo) + 1, 16, 512);
    const std::vector<double> grid = lin_space(s_lo, s_hi, points);
    std::size_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = R(grid[i]);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    const double a = grid[arg == 0 ? 0 : arg - 1];
    const double b = grid[std::min(arg + 1, grid.size() - 1)];
    const ScalarOptimum g = golden_section_maximize(R, a, b, 1e-7 * std::max(1.0, b));
    if (g.value > best) return {g.x, g.value};
    return {grid[arg], best};
}

std::string to_string(EnvelopeBranch branch) {
    return branch == EnvelopeBranch::param ? "param" : "horizontal";
}

SlbCurve slb_envelope(double entropy, const SupportAtlas& support, const Distortion& distortion,
                      const std::vector<double>& D_grid, const std::vector<double>& s_grid,
                      const GammaOptions& opts) {
    SlbCurve curve;
    const GammaPoint g0 = gamma_of_s(support, distortion, 0.0, opts);
    curve.horizontal = entropy - g0.log_gamma;
    std::vector<GammaPoint> gammas;
    gammas.reserve(s_grid.size());
    for (double s : s_grid) {
        if (!(s > 0.0)) continue;
        gammas.push_back(gamma_of_s(support, distortion, s, opts));
        const GammaPoint& g = gammas.back();
        curve.points.push_back({s, g.d_star, slb(entropy, g.d_star, g)});
    }
    for (double D : D_grid) {
        EnvelopePoint e;
        e.D = D;
        e.R = curve.horizontal;
        e.branch = EnvelopeBranch::horizontal;
        for (const auto& g : gammas) {
            const double r = slb(entropy, D, g);
            if (r > e.R) {
                e.R = r;
                e.s = g.s;
                e.branch = EnvelopeBranch::param;
            }
        }
        curve.envelope.push_back(e);
    }
    return curve;
}

RdUpperPoint rd_upper_bound(std::size_t n) {
    if (n < 1) throw InvalidArgument("rd_upper_bound: n must be at least 1");
    RdUpperPoint p;
    p.n = n;
    const double x = std::numbers::pi / static_cast<double>(n);
    const double c = one_minus_sinc(x);
    // 1 - sinc^2 = (1 - sinc)(1 + sinc)
    p.D_bar = c * (2.0 - c);
    p.R = std::log(static_cast<double>(n));
    return p;
}

RdUpperCurve::RdUpperCurve(std::size_t n_max) {
    if (n_max < 1) throw InvalidArgument("rd_upper_curve: n_max must be at least 1");
    points_.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) points_.push_back(rd_upper_bound(n));
}

std::optional<double> RdUpperCurve::operator()(double D) const {
    if (D >= points_.front().D_bar) return 0.0;
    if (D < points_.back().D_bar) return std::nullopt;
    // D_bar decreases in n; find consecutive points bracketing D.
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        const RdUpperPoint& a = points_[i];
        const RdUpperPoint& b = points_[i + 1];
        if (D <= a.D_bar && D >= b.D_bar) {
            const double t = (a.D_bar - D) / (a.D_bar - b.D_bar);
            return a.R + t * (b.R - a.R);
        }
    }
    return points_.back().R;
}

RdUpperCurve rd_upper_curve(std::size_t n_max) { return RdUpperCurve(n_max); }

ArcQuantizerDistortion arc_quantizer_distortion(std::size_t n, std::size_t samples, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("arc_quantizer_distortion: n must be at least 1");
    if (samples < 2) throw InvalidArgument("arc_quantizer_distortion: need at least 2 samples");
    const double width = kTwoPi / static_cast<double>(n);
    const double radius = 1.0 - one_minus_sinc(std::numbers::pi / static_cast<double>(n));
    Rng rng(seed);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double phi = kTwoPi * rng.uniform();
        const double j = std::min(std::floor(phi / width), static_cast<double>(n - 1));
        const double centre = (j + 0.5) * width;
        const double dx = std::cos(phi) - radius * std::cos(centre);
        const double dy = std::sin(phi) - radius * std::sin(centre);
        const double d = dx * dx + dy * dy;
        const double delta = d - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (d - mean);
    }
    ArcQuantizerDistortion out;
    out.mean = mean;
    out.samples = samples;
    out.std_error = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
    return out;
}

std::vector<GapRow> gap_report(const SlbCurve& lower, const RdUpperCurve& upper) {
    std::vector<GapRow> rows;
    for (const auto& e : lower.envelope) {
        const auto u = upper(e.D);
        if (!u) continue;
        GapRow r{e.D, e.R, *u, *u - e.R};
        if (r.gap < -1e-9) {
            std::ostringstream msg;
            msg.precision(12);
            msg << "upper bound below lower bound at D = " << e.D << ": upper " << *u << ", lower " << e.R;
            throw BoundViolation(msg.str());
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace rectent
