#pragma once

// (m, delta)-partitions of a support, quantized entropy, Huffman codes and the
// codeword-length bounds for quantized rectifiable sources.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rectent/sources.hpp"

namespace rectent {

/// Part of a cell: a parameter box of one chart.
struct PartitionPiece {
    std::size_t chart = 0;
    Box params;
};

struct PartitionCell {
    std::size_t id = 0;
    std::vector<PartitionPiece> pieces;
    double hausdorff_measure = 0.0;
    double probability = 0.0;
};

struct MeasurablePartition {
    std::vector<PartitionCell> cells;
    double delta = std::numeric_limits<double>::infinity();
    std::vector<std::string> warnings;

    double total_measure() const;
    double total_probability() const;
    double max_cell_measure() const;
    std::vector<double> probabilities() const;
};

/// N = ceil(H^m(E) / delta) cells of equal Hausdorff measure, cut by inverting
/// cumulative arclength across the charts in order (m = 1). A cell may span a
/// chart boundary, in which case it has one piece per chart.
MeasurablePartition equal_measure_partition(const RectifiableSource& source, double delta);

/// Cells between consecutive cuts of each chart (m = 1); `cuts[k]` lists the
/// interior cut parameters of chart k in any order.
MeasurablePartition partition_from_cuts(const RectifiableSource& source,
                                        const std::vector<std::vector<double>>& cuts);

/// Cells A x B of an i.i.d. pair: measures and probabilities multiply, delta squares.
MeasurablePartition product_partition(const MeasurablePartition& a, const MeasurablePartition& b);

/// H([x]_Q) = -sum p log p in nats.
double quantized_entropy(const MeasurablePartition& partition);

/// H([x]_Q) + sum_A p(A) log H^m(A); never below h^m(x).
double penalized_partition_functional(const MeasurablePartition& partition);

struct PrefixCode {
    std::vector<int> lengths;
    double expected_length_bits = 0.0;

    double kraft_sum() const;
};

/// Optimal binary prefix code. Ties are broken by (probability, node id), with
/// leaves numbered in input order and merged nodes numbered after them. A
/// single symbol gets the empty codeword (length 0).
PrefixCode huffman(const std::vector<double>& probabilities);

struct CodewordReport {
    double delta = 0.0;
    std::size_t n = 1;
    std::size_t n_cells = 0;
    /// Quantized entropy per source symbol, nats.
    double H_nats = 0.0;
    /// Huffman expected length per source symbol.
    double L_star_bits = 0.0;
    /// h ld e - ld delta.
    double lower_bits = 0.0;
    /// lower + (1 + epsilon) / n.
    double upper_bits = 0.0;
    double epsilon = 0.0;
    bool within_upper = false;
};

/// Quantizes with the equal-measure partition at delta (its n-fold product for
/// n = 2), Huffman-codes the cells and checks L* >= lower - 1e-9, throwing
/// BoundViolation otherwise. The upper bound is only reported.
CodewordReport verify_codeword_bounds(const RectifiableSource& source, double delta,
                                      std::size_t n = 1, double epsilon = 0.05,
                                      std::optional<double> entropy = std::nullopt);

}  // namespace rectent
