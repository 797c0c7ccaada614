#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "rectent/catalog.hpp"
#include "rectent/coding.hpp"
#include "rectent/entropy.hpp"
#include "rectent/error.hpp"
#include "rectent/rng.hpp"

using namespace rectent;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Minimum expected length over all length vectors with Kraft sum <= 1.
double brute_force_optimal_length(const std::vector<double>& p) {
    const int n = static_cast<int>(p.size());
    std::vector<int> len(p.size(), 1);
    double best = 1e300;
    std::function<void(int, double)> rec = [&](int i, double kraft) {
        if (kraft > 1.0 + 1e-12) return;
        if (i == n) {
            double e = 0.0;
            for (int k = 0; k < n; ++k) e += p[k] * len[k];
            best = std::min(best, e);
            return;
        }
        for (int l = 1; l < n; ++l) {
            len[i] = l;
            rec(i + 1, kraft + std::ldexp(1.0, -l));
        }
    };
    rec(0, 0.0);
    return best;
}

}  // namespace

TEST(Huffman, TextbookExample) {
    const PrefixCode c = huffman({0.4, 0.3, 0.2, 0.1});
    EXPECT_NEAR(c.expected_length_bits, 1.9, 1e-12);
    EXPECT_DOUBLE_EQ(c.kraft_sum(), 1.0);
}

TEST(Huffman, MatchesExhaustiveSearch) {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng.below(5);
        std::vector<double> p(n);
        double s = 0.0;
        for (double& v : p) s += (v = rng.uniform(0.01, 1.0));
        for (double& v : p) v /= s;
        const PrefixCode c = huffman(p);
        EXPECT_NEAR(c.expected_length_bits, brute_force_optimal_length(p), 1e-12);
        EXPECT_NEAR(c.kraft_sum(), 1.0, 1e-15);
        for (int l : c.lengths) EXPECT_GE(l, 1);
    }
}

TEST(Huffman, DegenerateInputs) {
    const PrefixCode one = huffman({1.0});
    EXPECT_EQ(one.lengths, std::vector<int>{0});
    EXPECT_EQ(one.expected_length_bits, 0.0);
    EXPECT_THROW(huffman({}), InvalidArgument);
    EXPECT_THROW(huffman({0.5, 0.0, 0.5}), InvalidArgument);
    EXPECT_THROW(huffman({0.5, 0.2}), InvalidArgument);
}

TEST(Huffman, TiesAreDeterministic) {
    const PrefixCode a = huffman({0.25, 0.25, 0.25, 0.25});
    EXPECT_EQ(a.lengths, (std::vector<int>{2, 2, 2, 2}));
    const PrefixCode b = huffman({0.2, 0.2, 0.2, 0.2, 0.2});
    EXPECT_EQ(b.lengths, huffman({0.2, 0.2, 0.2, 0.2, 0.2}).lengths);
    EXPECT_NEAR(b.expected_length_bits, 2.4, 1e-12);
}

TEST(Partition, EqualMeasureCells) {
    const RectifiableSource s = source_by_name("circle:vonmises:1");
    const MeasurablePartition q = equal_measure_partition(s, 1.0);
    ASSERT_EQ(q.cells.size(), 7u);
    for (const auto& c : q.cells) EXPECT_NEAR(c.hausdorff_measure, kTwoPi / 7.0, 1e-10);
    EXPECT_NEAR(q.total_measure(), kTwoPi, 1e-10);
    EXPECT_NEAR(q.total_probability(), 1.0, 1e-10);
    EXPECT_LE(q.max_cell_measure(), 1.0);
}

TEST(Partition, CellsSpanChartBoundaries) {
    // Two half-circle charts with cells of 2 pi / 3 force a cell across the seam.
    const RectifiableSource u = source_by_name("circle:uniform");
    const SupportAtlas halves({circle_chart(0.0, std::numbers::pi), circle_chart(std::numbers::pi, kTwoPi)});
    const RectifiableSource split(
        halves, [](std::size_t, const Vector&) { return 1.0 / kTwoPi; }, [&u](Rng& r) { return u.draw(r); });
    const MeasurablePartition q = equal_measure_partition(split, kTwoPi / 3.0);
    ASSERT_EQ(q.cells.size(), 3u);
    EXPECT_EQ(q.cells[1].pieces.size(), 2u);
    for (const auto& c : q.cells) EXPECT_NEAR(c.probability, 1.0 / 3.0, 1e-12);
}

TEST(Partition, WholeSupportWhenDeltaIsLarge) {
    const MeasurablePartition q = equal_measure_partition(source_by_name("circle:uniform"), 10.0);
    EXPECT_EQ(q.cells.size(), 1u);
    EXPECT_FALSE(q.warnings.empty());
    EXPECT_THROW(equal_measure_partition(source_by_name("circle:uniform"), 0.0), InvalidArgument);
    EXPECT_THROW(equal_measure_partition(source_by_name("wishart1:normal:2"), 0.1), UnsupportedError);
}

TEST(Partition, FromCuts) {
    const RectifiableSource u = source_by_name("circle:uniform");
    const MeasurablePartition q = partition_from_cuts(u, {{std::numbers::pi, 1.0}});
    ASSERT_EQ(q.cells.size(), 3u);
    EXPECT_NEAR(q.cells[0].hausdorff_measure, 1.0, 1e-12);
    EXPECT_NEAR(q.cells[0].probability, 1.0 / kTwoPi, 1e-12);
    EXPECT_THROW(partition_from_cuts(u, {{7.0}}), InvalidArgument);
}

TEST(Partition, FunctionalBoundsEntropy) {
    const RectifiableSource vm = source_by_name("circle:vonmises:1");
    const double h = entropy_analytic(vm).value;
    for (double delta : {2.0, 0.5, 0.05}) {
        const MeasurablePartition q = equal_measure_partition(vm, delta);
        EXPECT_GE(penalized_partition_functional(q), h - 1e-12);
    }
    // H([x]) + log delta -> h as delta -> 0.
    const MeasurablePartition fine = equal_measure_partition(vm, kTwoPi / 4096.0);
    EXPECT_NEAR(quantized_entropy(fine) + std::log(kTwoPi / 4096.0), h, 1e-6);
}

TEST(Partition, ZeroMeasureCellWithMassIsRejected) {
    MeasurablePartition q;
    q.cells.push_back({0, {}, 0.0, 0.5});
    q.cells.push_back({1, {}, 1.0, 0.5});
    EXPECT_THROW(penalized_partition_functional(q), BoundViolation);
}

TEST(Codeword, DyadicUniformCircleMeetsLowerBound) {
    const RectifiableSource u = source_by_name("circle:uniform");
    for (int k = 1; k <= 8; ++k) {
        const CodewordReport r = verify_codeword_bounds(u, kTwoPi / std::ldexp(1.0, k));
        EXPECT_EQ(r.n_cells, std::size_t{1} << k);
        EXPECT_NEAR(r.L_star_bits, static_cast<double>(k), 1e-12);
        EXPECT_NEAR(r.L_star_bits, r.lower_bits, 1e-9);
        EXPECT_TRUE(r.within_upper);
    }
}

TEST(Codeword, VonMisesWithinBounds) {
    const RectifiableSource vm = source_by_name("circle:vonmises:1");
    for (std::size_t n : {1u, 2u}) {
        const double delta = n == 1 ? kTwoPi / 64.0 : kTwoPi / 16.0;
        const CodewordReport r = verify_codeword_bounds(vm, delta, n);
        EXPECT_GE(r.L_star_bits, r.lower_bits);
        EXPECT_LE(r.L_star_bits, r.upper_bits);
        EXPECT_EQ(r.n_cells, n == 1 ? 64u : 256u);
    }
}

TEST(Codeword, WrongEntropyIsCaught) {
    EXPECT_THROW(verify_codeword_bounds(source_by_name("circle:uniform"), kTwoPi / 8.0, 1, 0.05, 10.0),
                 BoundViolation);
    EXPECT_THROW(verify_codeword_bounds(source_by_name("circle:uniform"), 1.0, 3), UnsupportedError);
}

TEST(Codeword, ProductPartition) {
    const RectifiableSource vm = source_by_name("circle:vonmises:1");
    const MeasurablePartition a = equal_measure_partition(vm, kTwoPi / 8.0);
    const MeasurablePartition p = product_partition(a, a);
    EXPECT_EQ(p.cells.size(), 64u);
    EXPECT_NEAR(p.total_probability(), 1.0, 1e-10);
    EXPECT_NEAR(quantized_entropy(p), 2.0 * quantized_entropy(a), 1e-10);
}
