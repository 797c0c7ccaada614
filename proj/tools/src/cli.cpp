#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "rectent/aep.hpp"
#include "rectent/catalog.hpp"
#include "rectent/coding.hpp"
#include "rectent/entropy.hpp"
#include "rectent/error.hpp"
#include "rectent/ratedistortion.hpp"
#include "rectent/table.hpp"

namespace rectent::cli {

namespace {

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::map<std::string, Command>& command_names() {
    static const std::map<std::string, Command> names = {
        {"entropy", Command::entropy}, {"marginal", Command::marginal}, {"chain", Command::chain},
        {"mi", Command::mi},           {"aep", Command::aep},           {"code", Command::code},
        {"gamma", Command::gamma},     {"slb", Command::slb},           {"envelope", Command::envelope},
        {"rdupper", Command::rdupper}, {"figures", Command::figures},
    };
    return names;
}

std::string describe(Command command) {
    switch (command) {
        case Command::entropy: return "differential entropy of a source";
        case Command::marginal: return "entropy of a coordinate projection";
        case Command::chain: return "chain rule with the tangential Jacobian correction";
        case Command::mi: return "mutual information of two sources";
        case Command::aep: return "empirical typical-set probability and measure bounds";
        case Command::code: return "Huffman code on an equal-measure partition";
        case Command::gamma: return "gamma(s), its maximizer and D*(s) over an s grid";
        case Command::slb: return "Shannon lower bound at fixed D over an s grid";
        case Command::envelope: return "Shannon lower bound envelope over a D grid";
        case Command::rdupper: return "n-arc quantizer upper bound on the circle";
        case Command::figures: return "write every curve as CSV into a directory";
    }
    return {};
}

IntegrationOptions integration(const RunConfig& c) {
    IntegrationOptions o;
    if (c.tol > 0.0) o.abs_tol = c.tol;
    return o;
}

EntropyEstimate estimate(const RectifiableSource& source, const RunConfig& c) {
    if (c.method == "quadrature") return entropy_quadrature(source, integration(c));
    if (c.method == "monte_carlo") return entropy_monte_carlo(source, c.seed, c.samples);
    if (c.method == "analytic") return entropy_analytic(source);
    if (c.method == "reference") return entropy_reference(source, integration(c));
    throw UsageError("unknown method '" + c.method + "' (analytic, quadrature, monte_carlo, reference)");
}

double unit(const RunConfig& c, double nats) { return c.bits ? nats / std::numbers::ln2 : nats; }

std::string coords_text(const std::vector<int>& coords) {
    std::string s;
    for (std::size_t i = 0; i < coords.size(); ++i) s += (i ? ";" : "") + std::to_string(coords[i] + 1);
    return s;
}

Table entropy_table(const RunConfig& c) {
    const RectifiableSource source = source_by_name(c.source);
    const EntropyEstimate e = estimate(source, c);
    Table t({"source", "method", "h", "std_error", "samples", "unit"});
    t.add_row({source.name(), to_string(e.method), unit(c, e.value), unit(c, e.std_error),
               static_cast<std::int64_t>(e.n_samples), std::string(c.bits ? "bits" : "nats")});
    return t;
}

Table marginal_table(const RunConfig& c) {
    const RectifiableSource source = source_by_name(c.source);
    const EntropyEstimate e = marginal_entropy(source, c.coords, integration(c));
    Table t({"source", "coords", "h_marginal", "unit"});
    t.add_row({source.name(), coords_text(c.coords), unit(c, e.value), std::string(c.bits ? "bits" : "nats")});
    return t;
}

Table chain_table(const RunConfig& c) {
    const RectifiableSource source = source_by_name(c.source);
    const JointDecomposition d = chain_decomposition(source, c.coords, integration(c));
    Table t({"term", "value"});
    t.add_row({std::string("joint"), unit(c, d.joint.value)});
    t.add_row({std::string("marginal"), unit(c, d.marginal_y.value)});
    t.add_row({std::string("conditional"), unit(c, d.conditional_x_given_y.value)});
    t.add_row({std::string("correction"), unit(c, d.jacobian_correction.value)});
    t.add_row({std::string("residual"), unit(c, d.residual())});
    return t;
}

Table mi_table(const RunConfig& c) {
    if (c.with.empty()) throw UsageError("mi needs --with <source>");
    const RectifiableSource x = source_by_name(c.source);
    const RectifiableSource y = source_by_name(c.with);
    std::optional<RectifiableSource> joint;
    if (!c.joint.empty()) joint = source_by_name(c.joint);
    EntropyMethod method = EntropyMethod::quadrature;
    if (c.method == "analytic") method = EntropyMethod::analytic;
    else if (c.method != "quadrature") throw UsageError("mi supports --method analytic or quadrature");
    const MutualInformation mi = mutual_information(x, y, joint ? &*joint : nullptr, method, integration(c));
    Table t({"x", "y", "joint", "I", "infinite"});
    t.add_row({x.name(), y.name(), joint ? joint->name() : std::string("independent"),
               mi.infinite ? std::numeric_limits<double>::infinity() : unit(c, mi.value),
               std::string(mi.infinite ? "true" : "false")});
    return t;
}

Table aep_table(const RunConfig& c, std::ostream& err) {
    const RectifiableSource source = source_by_name(c.source);
    const std::size_t n = c.n.value_or(50);
    const TypicalSetReport r = empirical_typicality(source, n, c.epsilon.value_or(0.1), c.trials, c.seed);
    Table t({"n", "epsilon", "trials", "typical", "probability", "std_error", "h", "measure_lower",
             "measure_upper", "measure"});
    double measure = std::numeric_limits<double>::quiet_NaN();
    if (n <= 2) {
        try {
            measure = typical_measure_estimate(source, n, r.epsilon, r.entropy_ref);
        } catch (const UnsupportedError& e) {
            err << "note: " << e.what() << '\n';
        }
    }
    t.add_row({static_cast<std::int64_t>(n), r.epsilon, static_cast<std::int64_t>(r.trials),
               static_cast<std::int64_t>(r.typical), r.empirical_prob, r.std_error, r.entropy_ref,
               r.measure_bounds.lower, r.measure_bounds.upper, measure});
    return t;
}

Table code_table(const RunConfig& c) {
    const RectifiableSource source = source_by_name(c.source);
    const double delta = c.delta.value_or(2.0 * std::numbers::pi / 64.0);
    const CodewordReport r = verify_codeword_bounds(source, delta, c.n.value_or(1),
                                                    c.epsilon.value_or(0.05), std::nullopt);
    Table t({"delta", "n", "cells", "H_nats", "L_bits", "lower_bits", "upper_bits", "within_upper"});
    t.add_row({r.delta, static_cast<std::int64_t>(r.n), static_cast<std::int64_t>(r.n_cells), r.H_nats,
               r.L_star_bits, r.lower_bits, r.upper_bits, std::string(r.within_upper ? "true" : "false")});
    return t;
}

Table gamma_table(const RunConfig& c, std::ostream& err) {
    const RectifiableSource source = source_by_name(c.source);
    const std::vector<double> grid = log_space(c.s_min.value_or(0.01), c.s_max.value_or(5000.0),
                                               c.s_points.value_or(50));
    Table t({"s", "y_star", "gamma", "log_gamma", "d_star"});
    for (double s : grid) {
        const GammaPoint g = gamma_of_s(source.support(), squared_error(), s);
        for (const auto& w : g.warnings) err << "warning: " << w << '\n';
        t.add_row({s, g.y_star.norm(), g.gamma, g.log_gamma, g.d_star});
    }
    return t;
}

Table slb_table(const RunConfig& c) {
    const RectifiableSource source = source_by_name(c.source);
    const double h = entropy_reference(source).value;
    const std::vector<double> grid = lin_space(c.s_min.value_or(1.0), c.s_max.value_or(94.0),
                                               c.s_points.value_or(94));
    Table t({"s", "R_slb"});
    for (const auto& p : slb_sweep(h, c.d, source.support(), squared_error(), grid)) t.add_row({p.s, p.R});
    return t;
}

SlbCurve envelope_curve(const RunConfig& c, const RectifiableSource& source) {
    const double h = entropy_reference(source).value;
    return slb_envelope(h, source.support(), squared_error(), log_space(c.d_min, c.d_max, c.d_points),
                        log_space(c.s_min.value_or(0.01), c.s_max.value_or(1e6), c.s_points.value_or(300)));
}

Table envelope_table(const SlbCurve& curve) {
    Table t({"D", "R", "branch"});
    for (const auto& e : curve.envelope) t.add_row({e.D, e.R, to_string(e.branch)});
    return t;
}

Table upper_table(const RdUpperCurve& curve) {
    Table t({"n", "D", "R"});
    for (const auto& p : curve.points()) t.add_row({static_cast<std::int64_t>(p.n), p.D_bar, p.R});
    return t;
}

Table rdupper_table(const RunConfig& c) {
    if (c.n) {
        const RdUpperPoint p = rd_upper_bound(*c.n);
        Table t({"n", "D", "R"});
        t.add_row({static_cast<std::int64_t>(p.n), p.D_bar, p.R});
        return t;
    }
    return upper_table(rd_upper_curve(c.n_max));
}

Table gaps_table(const SlbCurve& curve, const RdUpperCurve& upper) {
    Table t({"D", "lower", "upper", "gap"});
    for (const auto& g : gap_report(curve, upper)) t.add_row({g.D, g.lower, g.upper, g.gap});
    return t;
}

void write(const Table& t, Format f, std::ostream& os) {
    if (f == Format::csv) t.write_csv(os);
    else t.write_text(os);
}

void write_file(const Table& t, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open " + path.string() + " for writing");
    t.write_csv(f);
}

void figures(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.out.empty()) throw UsageError("figures needs --out <directory>");
    const std::filesystem::path dir(c.out);
    if (!std::filesystem::is_directory(dir)) throw UsageError("output directory " + c.out + " does not exist");
    const RectifiableSource source = source_by_name(c.source);
    const double h = entropy_reference(source).value;

    RunConfig fig2 = c;
    fig2.s_min = 0.01;
    fig2.s_max = 5000.0;
    fig2.s_points = 50;
    write_file(gamma_table(fig2, err), dir / "gammas.csv");

    Table sweep({"s", "R_slb"});
    for (const auto& p : slb_sweep(h, 0.01, source.support(), squared_error(), lin_space(1.0, 94.0, 94))) {
        sweep.add_row({p.s, p.R});
    }
    write_file(sweep, dir / "slb_d01.csv");

    const SlbCurve curve = envelope_curve(c, source);
    const RdUpperCurve upper = rd_upper_curve(c.n_max);
    write_file(envelope_table(curve), dir / "envelope.csv");
    write_file(upper_table(upper), dir / "upper.csv");
    write_file(gaps_table(curve, upper), dir / "gaps.csv");

    Table written({"file"});
    for (const char* f : {"gammas.csv", "slb_d01.csv", "envelope.csv", "upper.csv", "gaps.csv"}) {
        written.add_row({std::string(f)});
    }
    write(written, c.format, out);
}

Table compute(const RunConfig& c, std::ostream& err) {
    switch (c.command) {
        case Command::entropy: return entropy_table(c);
        case Command::marginal: return marginal_table(c);
        case Command::chain: return chain_table(c);
        case Command::mi: return mi_table(c);
        case Command::aep: return aep_table(c, err);
        case Command::code: return code_table(c);
        case Command::gamma: return gamma_table(c, err);
        case Command::slb: return slb_table(c);
        case Command::envelope: return envelope_table(envelope_curve(c, source_by_name(c.source)));
        case Command::rdupper: return rdupper_table(c);
        case Command::figures: break;
    }
    throw UsageError("figures writes files only");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        // Reject bad catalog strings before any computation.
        (void)source_by_name(config.source);
        if (!config.with.empty()) (void)source_by_name(config.with);
        if (!config.joint.empty()) (void)source_by_name(config.joint);

        if (config.command == Command::figures) {
            figures(config, out, err);
            return 0;
        }
        if (!config.out.empty()) {
            const std::filesystem::path path(config.out);
            const auto parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
            if (!std::filesystem::is_directory(parent)) {
                throw UsageError("parent directory of " + config.out + " does not exist");
            }
        }
        const Table t = compute(config, err);
        if (config.out.empty()) {
            write(t, config.format, out);
        } else {
            std::ofstream f(config.out, std::ios::binary);
            if (!f) throw UsageError("cannot open " + config.out + " for writing");
            write(t, config.format, f);
        }
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entropy, coding and rate-distortion bounds for rectifiable sources", "rectent"};
    app.require_subcommand(1, 1);

    RunConfig c;
    std::vector<int> coords_1based = {2};
    std::string format = "csv";
    std::optional<std::size_t> n;

    for (const auto& [name, command] : command_names()) {
        CLI::App* sub = app.add_subcommand(name, describe(command));
        sub->add_option("--source", c.source, "catalog source string");
        sub->add_option("--with", c.with, "second source (mi)");
        sub->add_option("--joint", c.joint, "joint source (mi)");
        sub->add_option("--coords", coords_1based, "1-based projected coordinates")->delimiter(',');
        sub->add_option("--method", c.method, "analytic | quadrature | monte_carlo | reference");
        sub->add_option("--delta", c.delta, "cell measure bound (code)");
        sub->add_option("--epsilon", c.epsilon, "typicality or coding slack");
        sub->add_option("--n", n, "block length or number of arcs");
        sub->add_option("--n-max", c.n_max, "largest n on the upper-bound curve");
        sub->add_option("--d", c.d, "distortion level (slb)");
        sub->add_option("--d-min", c.d_min);
        sub->add_option("--d-max", c.d_max);
        sub->add_option("--d-points", c.d_points);
        sub->add_option("--s-min", c.s_min);
        sub->add_option("--s-max", c.s_max);
        sub->add_option("--s-points", c.s_points);
        sub->add_option("--seed", c.seed);
        sub->add_option("--samples", c.samples);
        sub->add_option("--trials", c.trials);
        sub->add_option("--tol", c.tol, "absolute quadrature tolerance");
        sub->add_option("--out", c.out, "output file (directory for figures)");
        sub->add_option("--format", format)->check(CLI::IsMember({"csv", "table"}));
        sub->add_flag("--bits", c.bits, "report entropies in bits");
        sub->callback([&c, command = command] { c.command = command; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    c.coords.clear();
    for (int k : coords_1based) {
        if (k < 1) {
            err << "error: --coords are 1-based\n";
            return 2;
        }
        c.coords.push_back(k - 1);
    }
    c.n = n;
    c.format = format == "table" ? Format::table : Format::csv;
    return run(c, out, err);
}

}  // namespace rectent::cli
