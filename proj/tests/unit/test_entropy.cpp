#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rectent/catalog.hpp"
#include "rectent/entropy.hpp"
#include "rectent/error.hpp"

using namespace rectent;

namespace {

constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> v) {
    Vector x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double a : v) x[i++] = a;
    return x;
}

// Differential entropy of the arcsine density 1 / (pi sqrt(1 - y^2)) after
// y = sin u, by the midpoint rule in u.
double arcsine_entropy_midpoint(std::size_t cells) {
    const double h = kPi / static_cast<double>(cells);
    double s = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double u = -0.5 * kPi + (static_cast<double>(i) + 0.5) * h;
        s += std::log(kPi * std::cos(u)) / kPi;
    }
    return s * h;
}

}  // namespace

TEST(Entropy, UniformCircle) {
    const RectifiableSource s = source_by_name("circle:uniform");
    EXPECT_NEAR(entropy_quadrature(s).value, std::log(2.0 * kPi), 1e-9);
    const EntropyEstimate mc = entropy_monte_carlo(s, 1, 1000);
    EXPECT_NEAR(mc.value, std::log(2.0 * kPi), 1e-12);
    EXPECT_EQ(mc.n_samples, 1000u);
    EXPECT_EQ(entropy_reference(s).method, EntropyMethod::analytic);
}

TEST(Entropy, VonMisesClosedForm) {
    for (double kappa : {0.5, 1.0, 4.0}) {
        const RectifiableSource s = source_by_name("circle:vonmises:" + std::to_string(kappa));
        const double i0 = std::cyl_bessel_i(0.0, kappa);
        const double expected = std::log(2.0 * kPi * i0) - kappa * std::cyl_bessel_i(1.0, kappa) / i0;
        EXPECT_NEAR(entropy_quadrature(s).value, expected, 1e-8);
    }
}

TEST(Entropy, MonteCarloAgreesWithinStandardError) {
    const RectifiableSource s = source_by_name("circle:vonmises:1");
    const EntropyEstimate mc = entropy_monte_carlo(s, 12, 100000);
    EXPECT_GT(mc.std_error, 0.0);
    EXPECT_NEAR(mc.value, entropy_analytic(s).value, 4.0 * mc.std_error);
    EXPECT_THROW(entropy_monte_carlo(s, 1, 10), InvalidArgument);
}

TEST(Entropy, RankOneWishartQuadrature) {
    for (int m : {1, 2}) {
        const RectifiableSource s = source_by_name("wishart1:normal:" + std::to_string(m));
        EXPECT_NEAR(entropy_quadrature(s).value, rank_one_normal_entropy(m), 1e-5);
    }
}

TEST(Entropy, FlatEmbeddingIsGaussianEntropy) {
    const RectifiableSource s = source_by_name("embed:normal:2:3");
    EXPECT_NEAR(entropy_quadrature(s).value, std::log(2.0 * kPi * std::numbers::e), 1e-5);
}

TEST(Entropy, DiscreteIsShannonEntropy) {
    const RectifiableSource s = source_by_name("discrete:0.5,0.25,0.25");
    EXPECT_NEAR(entropy_quadrature(s).value, 1.5 * std::log(2.0), 1e-14);
}

TEST(Entropy, AnalyticMissingThrows) {
    const ParamDensity tri =
        make_param_density(Box::interval(0.0, 2.0 * kPi), [](const Vector& t) { return t[0] / (2.0 * kPi * kPi); });
    const RectifiableSource s = pushforward_source(tri, circle_chart());
    EXPECT_THROW(entropy_analytic(s), UnsupportedError);
    EXPECT_EQ(entropy_reference(s).method, EntropyMethod::quadrature);
}

TEST(Entropy, TransformedEntropy) {
    EXPECT_DOUBLE_EQ(entropy_transformed(1.0, 0.25), 1.25);
}

TEST(Marginal, CircleProjectionIsArcsine) {
    const RectifiableSource s = source_by_name("circle:uniform");
    const double oracle = arcsine_entropy_midpoint(1 << 20);
    EXPECT_NEAR(oracle, std::log(kPi / 2.0), 1e-4);
    EXPECT_NEAR(marginal_entropy(s, {1}).value, oracle, 1e-4);
    EXPECT_NEAR(marginal_entropy(s, {1}).value, std::log(kPi / 2.0), 1e-6);

    const MarginalDensity fy(s, {1});
    EXPECT_EQ(fy.dim(), 1);
    for (double y : {-0.9, 0.0, 0.5}) EXPECT_NEAR(fy(vec({y})), 1.0 / (kPi * std::sqrt(1.0 - y * y)), 1e-9);
    EXPECT_EQ(fy(vec({1.5})), 0.0);
}

TEST(Marginal, ProductFactorAndIdentity) {
    const RectifiableSource p = source_by_name("product:circle:vonmises:1xcircle:uniform");
    EXPECT_NEAR(marginal_entropy(p, {0, 1}).value, entropy_analytic(source_by_name("circle:vonmises:1")).value, 1e-8);
    EXPECT_NEAR(marginal_entropy(p, {2, 3}).value, std::log(2.0 * kPi), 1e-8);
    const RectifiableSource c = source_by_name("circle:uniform");
    EXPECT_NEAR(marginal_entropy(c, {0, 1}).value, std::log(2.0 * kPi), 1e-9);
}

TEST(Marginal, GaussianCoordinate) {
    const RectifiableSource g = source_by_name("gauss2:0.6");
    EXPECT_NEAR(marginal_entropy(g, {0}).value, 0.5 * std::log(2.0 * kPi * std::numbers::e), 1e-6);
}

TEST(Chain, CircleWithCorrection) {
    const JointDecomposition d = chain_decomposition(source_by_name("circle:uniform"), {1});
    EXPECT_NEAR(d.joint.value, std::log(2.0 * kPi), 1e-9);
    EXPECT_NEAR(d.marginal_y.value, std::log(kPi / 2.0), 1e-6);
    EXPECT_NEAR(d.conditional_x_given_y.value, std::log(2.0), 1e-6);
    EXPECT_NEAR(d.jacobian_correction.value, -std::log(2.0), 1e-6);
    EXPECT_NEAR(d.residual(), 0.0, 1e-5);
}

TEST(Chain, GaussianHasNoCorrection) {
    const double rho = 0.5;
    const JointDecomposition d = chain_decomposition(source_by_name("gauss2:0.5"), {1});
    EXPECT_NEAR(d.jacobian_correction.value, 0.0, 1e-6);
    // h(x | y) of a unit-variance Gaussian pair is 0.5 log(2 pi e (1 - rho^2)).
    EXPECT_NEAR(d.conditional_x_given_y.value, 0.5 * std::log(2.0 * kPi * std::numbers::e * (1.0 - rho * rho)), 1e-5);
    EXPECT_NEAR(d.residual(), 0.0, 1e-5);
}

TEST(Subadditivity, NaiveBoundFailsForCircleCoordinates) {
    // Both coordinates of the uniform circle have the arcsine marginal.
    const RectifiableSource c = source_by_name("circle:uniform");
    const double hx = marginal_entropy(c, {0}).value;
    const double hy = marginal_entropy(c, {1}).value;
    EXPECT_GT(entropy_quadrature(c).value, hx + hy);
}

TEST(Subadditivity, ProductPairsAreAdditive) {
    for (const char* name : {"product:circle:uniformxcircle:uniform", "product:circle:vonmises:1xcircle:vonmises:3",
                             "product:wishart1:normal:1xcircle:vonmises:2"}) {
        SCOPED_TRACE(name);
        const RectifiableSource p = source_by_name(name);
        const double hx = entropy_quadrature(*p.first_factor()).value;
        const double hy = entropy_quadrature(*p.second_factor()).value;
        const double hxy = entropy_quadrature(p).value;
        EXPECT_NEAR(hxy, hx + hy, 1e-5);
        EXPECT_LE(hxy, hx + hy + 1e-6);
        const int mx = p.first_factor()->ambient_dim();
        std::vector<int> ycoords;
        for (int i = mx; i < p.ambient_dim(); ++i) ycoords.push_back(i);
        const double hx_given_y = conditional_entropy(p, ycoords).value;
        EXPECT_LE(hx_given_y, hx + 1e-6);
        EXPECT_NEAR(hx_given_y, hx, 1e-5);
    }
}

TEST(MutualInformation, GaussianClosedForm) {
    const RectifiableSource x = source_by_name("embed:normal:1:1");
    const RectifiableSource j = source_by_name("gauss2:0.5");
    const MutualInformation mi = mutual_information(x, x, &j);
    EXPECT_FALSE(mi.infinite);
    EXPECT_NEAR(mi.value, -0.5 * std::log(1.0 - 0.25), 1e-5);
    EXPECT_NEAR(mutual_information(x, x).value, 0.0, 1e-9);
}

TEST(MutualInformation, LowerDimensionalJointIsInfinite) {
    const RectifiableSource x = source_by_name("embed:normal:1:1");
    const RectifiableSource c = source_by_name("circle:uniform");
    EXPECT_TRUE(mutual_information(x, x, &c).infinite);
}
