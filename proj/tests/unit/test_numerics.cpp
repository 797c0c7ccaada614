#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rectent/error.hpp"
#include "rectent/numerics.hpp"
#include "rectent/rng.hpp"

using namespace rectent;

namespace {

// I0(x) from its power series.
double bessel_i0_series(double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= (x * x / 4.0) / (static_cast<double>(k) * k);
        sum += term;
    }
    return sum;
}

}  // namespace

TEST(Integrate, SmoothIntegrands) {
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-12);
    const double e_cos = integrate([](double x) { return std::exp(std::cos(x)); }, 0.0, 2.0 * std::numbers::pi).value;
    EXPECT_NEAR(e_cos, 2.0 * std::numbers::pi * bessel_i0_series(1.0), 1e-11);
}

TEST(Integrate, EndpointSingularity) {
    QuadOptions q;
    q.abs_tol = 1e-10;
    EXPECT_NEAR(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, q).value, 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(integrate([](double x) { return std::log(x); }, 0.0, 1.0, q).value, -1.0, 1e-9);
}

TEST(Integrate, ReversedAndEmptyIntervals) {
    EXPECT_NEAR(integrate([](double x) { return x; }, 1.0, 0.0).value, -0.5, 1e-14);
    EXPECT_EQ(integrate([](double x) { return x; }, 1.0, 1.0).value, 0.0);
}

TEST(Integrate, NonFiniteIntegrandThrows) {
    EXPECT_THROW(integrate([](double) { return std::nan(""); }, 0.0, 1.0), Error);
}

TEST(Integrate, BudgetExhaustion) {
    QuadOptions q;
    q.abs_tol = 1e-15;
    q.rel_tol = 0.0;
    q.max_subdivisions = 3;
    auto f = [](double x) { return std::sin(200.0 * x) * std::exp(x); };
    EXPECT_THROW(integrate(f, 0.0, 10.0, q), ConvergenceError);
    q.throw_on_failure = false;
    const QuadResult r = integrate(f, 0.0, 10.0, q);
    EXPECT_FALSE(r.converged);
}

TEST(IntegrateBox, ProductAndGaussian) {
    const QuadResult r = integrate_box([](const Vector& x) { return x[0] * x[1]; }, Box::cube(2, 0.0, 1.0));
    EXPECT_NEAR(r.value, 0.25, 1e-12);
    CubatureOptions o;
    o.abs_tol = 1e-8;
    const QuadResult g =
        integrate_box([](const Vector& x) { return std::exp(-0.5 * x.squaredNorm()); }, Box::cube(2, -10.0, 10.0), o);
    EXPECT_NEAR(g.value, 2.0 * std::numbers::pi, 1e-7);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    const GaussRule rule = gauss_legendre(5);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 8);
    EXPECT_NEAR(s, 2.0 / 9.0, 1e-14);
}

TEST(Roots, BisectionAndScan) {
    EXPECT_NEAR(bisect_root([](double x) { return std::cos(x); }, 0.0, 2.0), std::numbers::pi / 2, 1e-12);
    EXPECT_THROW(bisect_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), InvalidArgument);
    const auto roots = find_roots([](double x) { return std::sin(x); }, 0.5, 10.0, 100);
    ASSERT_EQ(roots.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(roots[i], (i + 1) * std::numbers::pi, 1e-12);
}

TEST(GoldenSection, FindsMaximum) {
    const ScalarOptimum r = golden_section_maximize([](double x) { return -(x - 0.3) * (x - 0.3); }, -1.0, 2.0);
    EXPECT_NEAR(r.x, 0.3, 1e-8);
    EXPECT_NEAR(r.value, 0.0, 1e-15);
}

TEST(Grids, Endpoints) {
    const auto g = log_space(0.01, 5000.0, 50);
    ASSERT_EQ(g.size(), 50u);
    EXPECT_EQ(g.front(), 0.01);
    EXPECT_EQ(g.back(), 5000.0);
    const auto l = lin_space(1.0, 94.0, 94);
    EXPECT_EQ(l[49], 50.0);
}

TEST(Rng, DeterministicStreams) {
    Rng a(7), b(7), c(8);
    for (int i = 0; i < 10; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        EXPECT_NE(x, c.next_u64());
    }
    EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
    EXPECT_EQ(mix_seed(1, 5), mix_seed(1, 5));
}

TEST(Rng, Moments) {
    Rng rng(3);
    const int n = 200000;
    double su = 0.0, sn = 0.0, sn2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    EXPECT_NEAR(su / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(sn / n, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(sn2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
    for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.below(7), 7u);
}
