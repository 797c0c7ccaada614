#include "rectent/coding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "rectent/entropy.hpp"
#include "rectent/error.hpp"

namespace rectent {

namespace {

void require_curve(const RectifiableSource& source, const char* what) {
    if (source.support().is_discrete() || source.dim() != 1) {
        throw UnsupportedError(std::string(what) + ": only 1-dimensional supports are supported");
    }
}

QuadOptions piece_options() {
    QuadOptions q;
    q.abs_tol = 1e-14;
    q.rel_tol = 1e-13;
    q.max_subdivisions = 2000;
    return q;
}

double arclength(const LipschitzChart& chart, double a, double b) {
    Vector x(1);
    return integrate(
               [&](double t) {
                   x[0] = t;
                   return jacobian_determinant(chart, x).value;
               },
               a, b, piece_options())
        .value;
}

double piece_probability(const RectifiableSource& source, std::size_t k, double a, double b) {
    const LipschitzChart& chart = source.support().charts()[k];
    Vector x(1);
    return integrate(
               [&](double t) {
                   x[0] = t;
                   return source.chart_density(k, x) * jacobian_determinant(chart, x).value;
               },
               a, b, piece_options())
        .value;
}

void add_piece(const RectifiableSource& source, PartitionCell& cell, std::size_t k, double a, double b) {
    if (!(b > a)) return;
    const LipschitzChart& chart = source.support().charts()[k];
    cell.pieces.push_back({k, Box::interval(a, b)});
    cell.hausdorff_measure += arclength(chart, a, b);
    cell.probability += piece_probability(source, k, a, b);
}

// Parameter t in [lo, hi] with arclength(lo, t) = target.
double invert_arclength(const LipschitzChart& chart, double lo, double hi, double target) {
    return bisect_root([&](double t) { return arclength(chart, lo, t) - target; }, lo, hi,
                       1e-15 * (1.0 + std::abs(hi)), 200);
}

}  // namespace

double MeasurablePartition::total_measure() const {
    double s = 0.0;
    for (const auto& c : cells) s += c.hausdorff_measure;
    return s;
}

double MeasurablePartition::total_probability() const {
    double s = 0.0;
    for (const auto& c : cells) s += c.probability;
    return s;
}

double MeasurablePartition::max_cell_measure() const {
    double m = 0.0;
    for (const auto& c : cells) m = std::max(m, c.hausdorff_measure);
    return m;
}

std::vector<double> MeasurablePartition::probabilities() const {
    std::vector<double> p;
    p.reserve(cells.size());
    for (const auto& c : cells) p.push_back(c.probability);
    return p;
}

MeasurablePartition equal_measure_partition(const RectifiableSource& source, double delta) {
    require_curve(source, "equal_measure_partition");
    if (!(delta > 0.0)) throw InvalidArgument("equal_measure_partition: delta must be positive");
    const auto& charts = source.support().charts();
    std::vector<double> lengths;
    double total = 0.0;
    for (const auto& c : charts) {
        lengths.push_back(arclength(c, c.domain().lo[0], c.domain().hi[0]));
        total += lengths.back();
    }

    MeasurablePartition out;
    out.delta = delta;
    std::size_t cells = 1;
    if (delta >= total) {
        std::ostringstream msg;
        msg << "delta " << delta << " >= H^m(E) = " << total << ": single-cell partition";
        out.warnings.push_back(msg.str());
    } else {
        // The relative guard keeps rounding in total/delta from adding a cell.
        cells = static_cast<std::size_t>(std::ceil(total / delta * (1.0 - 1e-12)));
    }
    const double share = total / static_cast<double>(cells);

    std::size_t k = 0;
    double t = charts[0].domain().lo[0];
    double used_in_chart = 0.0;
    for (std::size_t id = 0; id < cells; ++id) {
        PartitionCell cell;
        cell.id = id;
        double need = share;
        const bool last = id + 1 == cells;
        while (k < charts.size()) {
            const double hi = charts[k].domain().hi[0];
            const double left = lengths[k] - used_in_chart;
            if (last || left <= need * (1.0 + 1e-13)) {
                add_piece(source, cell, k, t, hi);
                need -= left;
                ++k;
                used_in_chart = 0.0;
                if (k < charts.size()) t = charts[k].domain().lo[0];
                if (!last && need <= share * 1e-12) break;
                continue;
            }
            const double end = invert_arclength(charts[k], t, hi, need);
            add_piece(source, cell, k, t, end);
            used_in_chart += need;
            t = end;
            break;
        }
        out.cells.push_back(std::move(cell));
    }
    return out;
}

MeasurablePartition partition_from_cuts(const RectifiableSource& source,
                                        const std::vector<std::vector<double>>& cuts) {
    require_curve(source, "partition_from_cuts");
    const auto& charts = source.support().charts();
    if (cuts.size() != charts.size()) throw InvalidArgument("partition_from_cuts: need one cut list per chart");
    MeasurablePartition out;
    std::size_t id = 0;
    for (std::size_t k = 0; k < charts.size(); ++k) {
        const double lo = charts[k].domain().lo[0];
        const double hi = charts[k].domain().hi[0];
        std::vector<double> edges = {lo, hi};
        for (double c : cuts[k]) {
            if (!(c > lo && c < hi)) throw InvalidArgument("partition_from_cuts: cut outside chart interior");
            edges.push_back(c);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            PartitionCell cell;
            cell.id = id++;
            add_piece(source, cell, k, edges[i], edges[i + 1]);
            out.cells.push_back(std::move(cell));
        }
    }
    out.delta = out.max_cell_measure();
    return out;
}

MeasurablePartition product_partition(const MeasurablePartition& a, const MeasurablePartition& b) {
    MeasurablePartition out;
    out.delta = a.delta * b.delta;
    out.warnings = a.warnings;
    out.warnings.insert(out.warnings.end(), b.warnings.begin(), b.warnings.end());
    std::size_t nb_charts = 0;
    for (const auto& cb : b.cells) {
        for (const auto& p : cb.pieces) nb_charts = std::max(nb_charts, p.chart + 1);
    }
    for (const auto& ca : a.cells) {
        for (const auto& cb : b.cells) {
            PartitionCell cell;
            cell.id = ca.id * b.cells.size() + cb.id;
            for (const auto& pa : ca.pieces) {
                for (const auto& pb : cb.pieces) {
                    cell.pieces.push_back({pa.chart * nb_charts + pb.chart, Box::product(pa.params, pb.params)});
                }
            }
            cell.hausdorff_measure = ca.hausdorff_measure * cb.hausdorff_measure;
            cell.probability = ca.probability * cb.probability;
            out.cells.push_back(std::move(cell));
        }
    }
    return out;
}

double quantized_entropy(const MeasurablePartition& partition) {
    double h = 0.0;
    for (const auto& c : partition.cells) {
        if (c.probability > 0.0) h -= c.probability * std::log(c.probability);
    }
    return h;
}

double penalized_partition_functional(const MeasurablePartition& partition) {
    double value = quantized_entropy(partition);
    for (const auto& c : partition.cells) {
        if (!(c.probability > 0.0)) continue;
        if (!(c.hausdorff_measure > 0.0)) {
            throw BoundViolation("cell " + std::to_string(c.id) +
                                 " has positive probability but zero Hausdorff measure");
        }
        value += c.probability * std::log(c.hausdorff_measure);
    }
    return value;
}

double PrefixCode::kraft_sum() const {
    double s = 0.0;
    for (int l : lengths) s += std::ldexp(1.0, -l);
    return s;
}

PrefixCode huffman(const std::vector<double>& probabilities) {
    if (probabilities.empty()) throw InvalidArgument("huffman: need at least one symbol");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("huffman: probabilities must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) throw InvalidArgument("huffman: probabilities must sum to 1");

    const std::size_t n = probabilities.size();
    PrefixCode code;
    code.lengths.assign(n, 0);
    if (n == 1) return code;

    using Node = std::pair<double, std::size_t>;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> queue;
    std::vector<std::size_t> parent(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) queue.emplace(probabilities[i], i);
    std::size_t next = n;
    while (queue.size() > 1) {
        const Node a = queue.top();
        queue.pop();
        const Node b = queue.top();
        queue.pop();
        parent[a.second] = next;
        parent[b.second] = next;
        queue.emplace(a.first + b.first, next);
        ++next;
    }
    const std::size_t root = next - 1;
    std::vector<int> depth(2 * n - 1, 0);
    for (std::size_t v = root; v-- > 0;) depth[v] = depth[parent[v]] + 1;
    for (std::size_t i = 0; i < n; ++i) {
        code.lengths[i] = depth[i];
        code.expected_length_bits += probabilities[i] * depth[i];
    }
    return code;
}

CodewordReport verify_codeword_bounds(const RectifiableSource& source, double delta, std::size_t n,
                                      double epsilon, std::optional<double> entropy) {
    if (n != 1 && n != 2) throw UnsupportedError("verify_codeword_bounds: n must be 1 or 2");
    if (!(epsilon >= 0.0)) throw InvalidArgument("verify_codeword_bounds: epsilon must be nonnegative");
    const double h = entropy ? *entropy : entropy_reference(source).value;

    const MeasurablePartition single = equal_measure_partition(source, delta);
    const MeasurablePartition partition = n == 1 ? single : product_partition(single, single);
    std::vector<double> p;
    for (double v : partition.probabilities()) {
        if (v > 0.0) p.push_back(v);
    }
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;
    const PrefixCode code = huffman(p);

    CodewordReport r;
    r.delta = delta;
    r.n = n;
    r.n_cells = partition.cells.size();
    r.H_nats = quantized_entropy(partition) / static_cast<double>(n);
    r.L_star_bits = code.expected_length_bits / static_cast<double>(n);
    r.lower_bits = h / std::numbers::ln2 - std::log2(delta);
    r.upper_bits = r.lower_bits + (1.0 + epsilon) / static_cast<double>(n);
    r.epsilon = epsilon;
    r.within_upper = r.L_star_bits <= r.upper_bits;
    if (r.L_star_bits < r.lower_bits - 1e-9) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "codeword lower bound violated for '" << source.name() << "': delta=" << delta
            << " n=" << n << " cells=" << r.n_cells << " L*=" << r.L_star_bits
            << " lower=" << r.lower_bits << " h=" << h;
        throw BoundViolation(msg.str());
    }
    return r;
}

}  // namespace rectent
