#include "rectent/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rectent/error.hpp"

namespace rectent {

Box::Box(Vector lower, Vector upper) : lo(std::move(lower)), hi(std::move(upper)) {
    if (lo.size() != hi.size()) {
        throw InvalidArgument("Box: bound dimensions differ");
    }
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
            throw InvalidArgument("Box: need finite lo < hi on every axis");
        }
    }
}

Box Box::interval(double a, double b) {
    return Box(Vector::Constant(1, a), Vector::Constant(1, b));
}

Box Box::cube(int dim, double a, double b) {
    return Box(Vector::Constant(dim, a), Vector::Constant(dim, b));
}

double Box::volume() const { return (hi - lo).prod(); }

bool Box::contains(const Vector& x, double slack) const {
    if (x.size() != lo.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    }
    return true;
}

Box Box::product(const Box& a, const Box& b) {
    Vector lo(a.dim() + b.dim());
    Vector hi(a.dim() + b.dim());
    lo << a.lo, b.lo;
    hi << a.hi, b.hi;
    return Box(lo, hi);
}

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk21 = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk21 = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980223151, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
constexpr std::array<double, 5> kWg10 = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kXgk15 = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk15 = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5 and the center.
constexpr std::array<double, 4> kWg7 = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a;
    double b;
    double value;
    double error;
};

struct IntervalWorse {
    bool operator()(const Interval& x, const Interval& y) const { return x.error < y.error; }
};

void check_finite(double v, double x) {
    if (!std::isfinite(v)) {
        throw Error("integrand is not finite at x = " + std::to_string(x));
    }
}

Interval gk21(const ScalarFn& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    check_finite(fc, center);
    double kronrod = kWgk21[10] * fc;
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk21[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        check_finite(f1, center - dx);
        check_finite(f2, center + dx);
        kronrod += kWgk21[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg10[j / 2] * (f1 + f2);
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

// Node/weight tables of the 15-point Kronrod rule expanded to all nodes, with
// the Gauss weights embedded (zero where the node is not a Gauss node).
struct ExpandedRule {
    std::array<double, 15> x{};
    std::array<double, 15> wk{};
    std::array<double, 15> wg{};
};

ExpandedRule expand_gk15() {
    ExpandedRule r;
    std::size_t k = 0;
    for (std::size_t j = 0; j < 7; ++j) {
        const double wg = (j % 2 == 1) ? kWg7[j / 2] : 0.0;
        r.x[k] = -kXgk15[j];
        r.wk[k] = kWgk15[j];
        r.wg[k] = wg;
        ++k;
        r.x[k] = kXgk15[j];
        r.wk[k] = kWgk15[j];
        r.wg[k] = wg;
        ++k;
    }
    r.x[14] = 0.0;
    r.wk[14] = kWgk15[7];
    r.wg[14] = kWg7[3];
    return r;
}

struct Cell {
    Vector lo;
    Vector hi;
    double value;
    double error;
    int split_axis;
};

struct CellWorse {
    bool operator()(const Cell& x, const Cell& y) const { return x.error < y.error; }
};

Cell product_rule(const FieldFn& f, const Vector& lo, const Vector& hi, const ExpandedRule& rule) {
    const int d = static_cast<int>(lo.size());
    const Vector center = 0.5 * (lo + hi);
    const Vector half = 0.5 * (hi - lo);
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= 15;

    std::array<double, 4> axis_sum{};  // Gauss on one axis, Kronrod elsewhere
    double kronrod = 0.0;
    double gauss = 0.0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    Vector x(d);
    for (std::size_t n = 0; n < total; ++n) {
        std::size_t rem = n;
        for (int i = 0; i < d; ++i) {
            idx[static_cast<std::size_t>(i)] = rem % 15;
            rem /= 15;
            x[i] = center[i] + half[i] * rule.x[idx[static_cast<std::size_t>(i)]];
        }
        const double v = f(x);
        if (!std::isfinite(v)) {
            throw Error("integrand is not finite inside cubature box");
        }
        double wk = 1.0;
        double wg = 1.0;
        for (int i = 0; i < d; ++i) {
            wk *= rule.wk[idx[static_cast<std::size_t>(i)]];
            wg *= rule.wg[idx[static_cast<std::size_t>(i)]];
        }
        kronrod += wk * v;
        gauss += wg * v;
        for (int a = 0; a < d; ++a) {
            const std::size_t ia = idx[static_cast<std::size_t>(a)];
            if (rule.wg[ia] == 0.0) continue;
            axis_sum[static_cast<std::size_t>(a)] += wk / rule.wk[ia] * rule.wg[ia] * v;
        }
    }
    const double jac = half.prod();
    int axis = 0;
    double worst = -1.0;
    for (int a = 0; a < d; ++a) {
        const double diff = std::abs(kronrod - axis_sum[static_cast<std::size_t>(a)]);
        if (diff > worst) {
            worst = diff;
            axis = a;
        }
    }
    return {lo, hi, kronrod * jac, std::abs(kronrod - gauss) * jac, axis};
}

}  // namespace

QuadResult integrate(const ScalarFn& f, double a, double b, const QuadOptions& opts) {
    QuadResult result;
    if (a == b) {
        result.converged = true;
        return result;
    }
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    const std::size_t panels = std::max<std::size_t>(1, opts.initial_panels);
    std::vector<Interval> heap;
    heap.reserve(panels + opts.max_subdivisions + 1);
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = (i + 1 == panels) ? b : a + width * static_cast<double>(i + 1);
        heap.push_back(gk21(f, lo, hi));
        std::push_heap(heap.begin(), heap.end(), IntervalWorse{});
    }
    std::size_t evaluations = 21 * panels;

    double value = 0.0;
    double error = 0.0;
    for (const auto& iv : heap) {
        value += iv.value;
        error += iv.error;
    }
    std::size_t splits = 0;
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
        if (splits >= opts.max_subdivisions) break;
        std::pop_heap(heap.begin(), heap.end(), IntervalWorse{});
        const Interval worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval cannot be split further in floating point.
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), IntervalWorse{});
            break;
        }
        const Interval left = gk21(f, worst.a, mid);
        const Interval right = gk21(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), IntervalWorse{});
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), IntervalWorse{});
        evaluations += 42;
        ++splits;
    }

    // Deterministic summation order: left to right.
    std::sort(heap.begin(), heap.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    value = 0.0;
    error = 0.0;
    for (const auto& iv : heap) {
        value += iv.value;
        error += iv.error;
    }
    result.value = sign * value;
    result.error = error;
    result.evaluations = evaluations;
    result.converged = error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    if (!result.converged && opts.throw_on_failure) {
        throw ConvergenceError("adaptive quadrature did not converge", result.value, error);
    }
    return result;
}

QuadResult integrate_box(const FieldFn& f, const Box& box, const CubatureOptions& opts) {
    const int d = box.dim();
    if (d < 1 || d > 4) {
        throw UnsupportedError("integrate_box supports dimensions 1..4, got " + std::to_string(d));
    }
    static const ExpandedRule rule = expand_gk15();
    std::size_t per_cell = 1;
    for (int i = 0; i < d; ++i) per_cell *= 15;

    std::vector<Cell> heap;
    const std::size_t panels = std::max<std::size_t>(1, opts.initial_panels);
    std::size_t n_start = 1;
    for (int i = 0; i < d; ++i) n_start *= panels;
    const Vector step = (box.hi - box.lo) / static_cast<double>(panels);
    for (std::size_t n = 0; n < n_start; ++n) {
        std::size_t rem = n;
        Vector lo(d);
        Vector hi(d);
        for (int i = 0; i < d; ++i) {
            const std::size_t k = rem % panels;
            rem /= panels;
            lo[i] = box.lo[i] + step[i] * static_cast<double>(k);
            hi[i] = (k + 1 == panels) ? box.hi[i] : box.lo[i] + step[i] * static_cast<double>(k + 1);
        }
        heap.push_back(product_rule(f, lo, hi, rule));
        std::push_heap(heap.begin(), heap.end(), CellWorse{});
    }
    std::size_t evaluations = per_cell * n_start;

    double value = 0.0;
    double error = 0.0;
    for (const auto& c : heap) {
        value += c.value;
        error += c.error;
    }
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
        if (evaluations + 2 * per_cell > opts.max_evaluations) break;
        std::pop_heap(heap.begin(), heap.end(), CellWorse{});
        const Cell worst = heap.back();
        heap.pop_back();
        const int a = worst.split_axis;
        const double mid = 0.5 * (worst.lo[a] + worst.hi[a]);
        Vector left_hi = worst.hi;
        left_hi[a] = mid;
        Vector right_lo = worst.lo;
        right_lo[a] = mid;
        Cell left = product_rule(f, worst.lo, left_hi, rule);
        Cell right = product_rule(f, right_lo, worst.hi, rule);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(std::move(left));
        std::push_heap(heap.begin(), heap.end(), CellWorse{});
        heap.push_back(std::move(right));
        std::push_heap(heap.begin(), heap.end(), CellWorse{});
        evaluations += 2 * per_cell;
    }

    // Re-sum in a fixed lexicographic order so results do not depend on drift.
    std::sort(heap.begin(), heap.end(), [](const Cell& x, const Cell& y) {
        return std::lexicographical_compare(x.lo.begin(), x.lo.end(), y.lo.begin(), y.lo.end());
    });
    value = 0.0;
    error = 0.0;
    for (const auto& c : heap) {
        value += c.value;
        error += c.error;
    }
    QuadResult result{value, error, evaluations,
                      error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value))};
    if (!result.converged && opts.throw_on_failure) {
        throw ConvergenceError("adaptive cubature did not converge", value, error);
    }
    return result;
}

GaussRule gauss_legendre(std::size_t n) {
    if (n == 0) throw InvalidArgument("gauss_legendre: need n >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double bisect_root(const ScalarFn& f, double a, double b, double xtol, int max_iter) {
    double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!(fa * fb < 0.0)) {
        throw InvalidArgument("bisect_root: bracket does not change sign");
    }
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> find_roots(const ScalarFn& f, double a, double b, std::size_t cells,
                               double xtol) {
    if (cells == 0 || !(a < b)) throw InvalidArgument("find_roots: need cells > 0 and a < b");
    std::vector<double> roots;
    const double h = (b - a) / static_cast<double>(cells);
    double x0 = a;
    double f0 = f(x0);
    for (std::size_t i = 0; i < cells; ++i) {
        const double x1 = (i + 1 == cells) ? b : a + h * static_cast<double>(i + 1);
        const double f1 = f(x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if (f0 * f1 < 0.0) {
            roots.push_back(bisect_root(f, x0, x1, xtol));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

ScalarOptimum golden_section_maximize(const ScalarFn& f, double a, double b, double xtol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 400 && b - a > xtol; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

std::vector<double> log_space(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi >= lo) || points == 0) {
        throw InvalidArgument("log_space: need 0 < lo <= hi and points >= 1");
    }
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    const double l0 = std::log(lo);
    const double l1 = std::log(hi);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> lin_space(double lo, double hi, std::size_t points) {
    if (points == 0) throw InvalidArgument("lin_space: need points >= 1");
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    out.back() = hi;
    return out;
}

}  // namespace rectent
