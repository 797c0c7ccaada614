#include "rectent/aep.hpp"

#include <algorithm>
#include <cmath>

#include "rectent/entropy.hpp"
#include "rectent/error.hpp"

namespace rectent {

namespace {

// Slack on the typical-set shell so that constant densities, whose -log theta
// equals h only up to rounding, count as typical at epsilon = 0.
constexpr double kShellSlack = 1e-12;

double resolve_entropy(const RectifiableSource& source, std::optional<double> entropy) {
    if (entropy) {
        if (!std::isfinite(*entropy)) throw InvalidArgument("typical set: entropy must be finite");
        return *entropy;
    }
    return entropy_reference(source).value;
}

// H^1 measure of {x on a curve : lo <= -log theta(x) <= hi}, with -log theta
// tabulated once per chart so each query only bisects the bracketing cells.
class InformationLevels {
public:
    InformationLevels(const RectifiableSource& source, std::size_t cells) : source_(source) {
        const auto& charts = source.support().charts();
        grids_.resize(charts.size());
        for (std::size_t k = 0; k < charts.size(); ++k) {
            const Box& d = charts[k].domain();
            Grid& g = grids_[k];
            g.t.resize(cells + 1);
            g.a.resize(cells + 1);
            for (std::size_t i = 0; i <= cells; ++i) {
                g.t[i] = i == cells ? d.hi[0]
                                    : d.lo[0] + (d.hi[0] - d.lo[0]) * static_cast<double>(i) /
                                                    static_cast<double>(cells);
                g.a[i] = info(k, g.t[i]);
            }
        }
    }

    double info(std::size_t k, double t) const {
        const double theta = source_.chart_density(k, Vector::Constant(1, t));
        return -std::log(std::max(theta, 1e-300));
    }

    double measure_between(double lo, double hi, double tol) const {
        lo -= kShellSlack;
        hi += kShellSlack;
        double total = 0.0;
        const auto& charts = source_.support().charts();
        for (std::size_t k = 0; k < charts.size(); ++k) {
            const Grid& g = grids_[k];
            std::vector<double> cuts = {g.t.front(), g.t.back()};
            for (double level : {lo, hi}) {
                auto r = [&](double t) { return info(k, t) - level; };
                for (std::size_t i = 0; i + 1 < g.t.size(); ++i) {
                    const double ra = g.a[i] - level;
                    const double rb = g.a[i + 1] - level;
                    if (ra * rb < 0.0) cuts.push_back(bisect_root(r, g.t[i], g.t[i + 1], 1e-14));
                }
            }
            std::sort(cuts.begin(), cuts.end());
            const LipschitzChart& chart = charts[k];
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                const double a = cuts[i];
                const double b = cuts[i + 1];
                if (!(b > a)) continue;
                const double mid = info(k, 0.5 * (a + b));
                if (mid < lo || mid > hi) continue;
                QuadOptions q;
                q.abs_tol = tol;
                Vector x(1);
                total += integrate(
                             [&](double t) {
                                 x[0] = t;
                                 return jacobian_determinant(chart, x).value;
                             },
                             a, b, q)
                             .value;
            }
        }
        return total;
    }

private:
    struct Grid {
        std::vector<double> t;
        std::vector<double> a;
    };
    const RectifiableSource& source_;
    std::vector<Grid> grids_;
};

}  // namespace

MeasureBounds typical_measure_bounds(double entropy, std::size_t n, double epsilon, double delta) {
    const double dn = static_cast<double>(n);
    return MeasureBounds{(1.0 - delta) * std::exp(dn * (entropy - epsilon)),
                         std::exp(dn * (entropy + epsilon)), delta};
}

TypicalSetReport empirical_typicality(const RectifiableSource& source, std::size_t n,
                                      double epsilon, std::size_t trials, std::uint64_t seed,
                                      std::optional<double> entropy) {
    if (n < 1) throw InvalidArgument("empirical_typicality: n must be at least 1");
    if (trials < 1000) throw InvalidArgument("empirical_typicality: need at least 1000 trials");
    if (!(epsilon >= 0.0)) throw InvalidArgument("empirical_typicality: epsilon must be nonnegative");
    TypicalSetReport report;
    report.n = n;
    report.epsilon = epsilon;
    report.trials = trials;
    report.entropy_ref = resolve_entropy(source, entropy);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, t));
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum -= std::log(std::max(source.draw(rng).density, 1e-300));
        if (std::abs(sum / static_cast<double>(n) - report.entropy_ref) <= epsilon + kShellSlack) {
            ++report.typical;
        }
    }
    const double p = static_cast<double>(report.typical) / static_cast<double>(trials);
    report.empirical_prob = p;
    report.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    report.measure_bounds = typical_measure_bounds(report.entropy_ref, n, epsilon, 1.0 - p);
    return report;
}

double typical_measure_estimate(const RectifiableSource& source, std::size_t n, double epsilon,
                                std::optional<double> entropy, double tol) {
    if (n != 1 && n != 2) throw UnsupportedError("typical_measure_estimate: n must be 1 or 2");
    if (!(epsilon >= 0.0)) throw InvalidArgument("typical_measure_estimate: epsilon must be nonnegative");
    const double h = resolve_entropy(source, entropy);
    const SupportAtlas& support = source.support();

    if (support.is_discrete()) {
        const auto& pts = support.discrete_points().points;
        std::vector<double> info(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) info[i] = -std::log(source.chart_density(i, pts[i]));
        double count = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (n == 1) {
                if (std::abs(info[i] - h) <= epsilon + kShellSlack) count += 1.0;
                continue;
            }
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (std::abs(0.5 * (info[i] + info[j]) - h) <= epsilon + kShellSlack) count += 1.0;
            }
        }
        return count;
    }
    if (support.dim() != 1) throw UnsupportedError("typical_measure_estimate: only curves and finite sources");

    const InformationLevels levels(source, 4096);
    if (n == 1) return levels.measure_between(h - epsilon, h + epsilon, tol);

    double total = 0.0;
    const auto& charts = support.charts();
    QuadOptions q;
    q.abs_tol = std::max(tol, 1e-7);
    q.rel_tol = 1e-9;
    q.max_subdivisions = 20000;
    for (std::size_t k = 0; k < charts.size(); ++k) {
        const Box& d = charts[k].domain();
        Vector x(1);
        auto outer = [&](double t) {
            x[0] = t;
            const double a1 = levels.info(k, t);
            const double inner =
                levels.measure_between(2.0 * (h - epsilon) - a1, 2.0 * (h + epsilon) - a1, 1e-12);
            return inner * jacobian_determinant(charts[k], x).value;
        };
        total += integrate(outer, d.lo[0], d.hi[0], q).value;
    }
    return total;
}

}  // namespace rectent
