// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gamma_oracle.hpp"
#include "rectent/aep.hpp"
#include "rectent/catalog.hpp"
#include "rectent/coding.hpp"
#include "rectent/entropy.hpp"
#include "rectent/ratedistortion.hpp"

using namespace rectent;

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog2Pi = std::log(2.0 * kPi);

// Maximal R_SLB at D = 0.01 over s in [1, 94], fixed by the first validated run.
constexpr double kSlbGolden = 2.71901102;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

using Criterion = std::function<void(Outcome&)>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 9) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double arcsine_entropy_midpoint(std::size_t cells) {
    const double h = kPi / static_cast<double>(cells);
    double s = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double u = -0.5 * kPi + (static_cast<double>(i) + 0.5) * h;
        s += std::log(kPi * std::cos(u)) / kPi;
    }
    return s * h;
}

void criterion1(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const RectifiableSource s = source_by_name("circle:uniform");
    const double q = entropy_quadrature(s).value;
    const EntropyEstimate mc = entropy_monte_carlo(s, 42, 1000000);
    const double t = seconds_since(t0);
    o.detail << "quadrature " << fmt(q) << ", monte carlo " << fmt(mc.value) << " +- " << fmt(mc.std_error, 3)
             << ", " << fmt(t, 3) << " s";
    o.check(std::abs(q - kLog2Pi) <= 1e-6, "quadrature within 1e-6");
    o.check(std::abs(mc.value - kLog2Pi) <= 3.0 * mc.std_error + 1e-12, "monte carlo within 3 sigma");
    o.check(t < 5.0, "runtime < 5 s");
}

void criterion2(Outcome& o) {
    const RectifiableSource s = source_by_name("circle:uniform");
    const double m = marginal_entropy(s, {1}).value;
    const double direct = arcsine_entropy_midpoint(1 << 20);
    o.detail << "coarea " << fmt(m) << ", direct arcsine " << fmt(direct) << ", log(pi/2) " << fmt(std::log(kPi / 2));
    o.check(std::abs(m - std::log(kPi / 2.0)) <= 1e-4, "coarea within 1e-4 of log(pi/2)");
    o.check(std::abs(m - direct) <= 1e-4, "matches direct 1-D entropy");
}

void criterion3(Outcome& o) {
    const JointDecomposition d = chain_decomposition(source_by_name("circle:uniform"), {1});
    o.detail << "joint " << fmt(d.joint.value) << ", marginal " << fmt(d.marginal_y.value) << ", conditional "
             << fmt(d.conditional_x_given_y.value) << ", correction " << fmt(d.jacobian_correction.value)
             << ", residual " << fmt(d.residual(), 3);
    o.check(std::abs(d.residual()) <= 1e-5, "residual within 1e-5");
    o.check(std::abs(d.conditional_x_given_y.value - std::log(2.0)) <= 1e-5, "conditional = log 2");
    o.check(std::abs(d.jacobian_correction.value + std::log(2.0)) <= 1e-5, "correction = -log 2");
}

void criterion4(Outcome& o) {
    const RectifiableSource c = source_by_name("circle:uniform");
    const double joint = entropy_quadrature(c).value;
    const double hx = marginal_entropy(c, {0}).value;
    const double hy = marginal_entropy(c, {1}).value;
    o.detail << "h(x,y) " << fmt(joint) << " > h(x) + h(y) " << fmt(hx + hy);
    o.check(kLog2Pi > 2.0 * std::log(kPi / 2.0), "log 2pi > 2 log(pi/2)");
    o.check(joint > hx + hy, "computed joint exceeds sum of marginals");
    double worst = 0.0;
    for (const char* name : {"product:circle:uniformxcircle:vonmises:1", "product:circle:vonmises:1xcircle:vonmises:4",
                             "product:wishart1:normal:1xcircle:uniform"}) {
        const RectifiableSource p = source_by_name(name);
        const double a = entropy_quadrature(*p.first_factor()).value;
        const double b = entropy_quadrature(*p.second_factor()).value;
        const double ab = entropy_quadrature(p).value;
        std::vector<int> ycoords;
        for (int i = p.first_factor()->ambient_dim(); i < p.ambient_dim(); ++i) ycoords.push_back(i);
        const double a_given_b = conditional_entropy(p, ycoords).value;
        o.check(ab <= a + b + 1e-6, std::string("subadditivity for ") + name);
        o.check(a_given_b <= a + 1e-6, std::string("conditioning for ") + name);
        worst = std::max({worst, ab - a - b, a_given_b - a});
    }
    o.detail << ", worst product-pair excess " << fmt(worst, 3);
}

void criterion5(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const RectifiableSource s = source_by_name("wishart1:normal:2");
    const EntropyEstimate mc = entropy_monte_carlo(s, 42, 1000000);
    const double t = seconds_since(t0);
    // Closed form log(2^{3/2} pi) + 1 + psi(1) + log 2 with psi(1) = -Euler's constant.
    const double closed = std::log(std::pow(2.0, 1.5) * kPi) + 1.0 - 0.57721566490153286 + std::log(2.0);
    o.detail << "monte carlo " << fmt(mc.value) << " +- " << fmt(mc.std_error, 3) << ", closed form "
             << fmt(closed) << ", " << fmt(t, 3) << " s";
    o.check(std::abs(closed - rank_one_normal_entropy(2)) <= 1e-12, "library closed form");
    o.check(std::abs(mc.value - closed) <= 4.0 * mc.std_error, "within 4 sigma");
    o.check(t < 30.0, "runtime < 30 s");
}

void criterion6(Outcome& o) {
    const double h = entropy_quadrature(source_by_name("product:circle:uniformxcircle:uniform")).value;
    o.detail << "h " << fmt(h) << ", 2 log 2pi " << fmt(2.0 * kLog2Pi);
    o.check(std::abs(h - 2.0 * kLog2Pi) <= 1e-5, "within 1e-5");
}

void criterion7(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const RectifiableSource s = source_by_name("circle:vonmises:1");
    const TypicalSetReport r50 = empirical_typicality(s, 50, 0.1, 10000, 42);
    const TypicalSetReport r1 = empirical_typicality(s, 1, 0.1, 10000, 42);
    const double measure = typical_measure_estimate(s, 1, 0.1);
    const double t = seconds_since(t0);

    const double i0 = std::cyl_bessel_i(0.0, 1.0);
    const double mean = std::cyl_bessel_i(1.0, 1.0) / i0;
    const double var = 0.5 * (1.0 + std::cyl_bessel_i(2.0, 1.0) / i0) - mean * mean;
    const double clt = 2.0 * normal_cdf(0.1 * std::sqrt(50.0 / var)) - 1.0;
    o.detail << "n=50 probability " << fmt(r50.empirical_prob, 5) << " +- " << fmt(r50.std_error, 2)
             << " (normal approximation " << fmt(clt, 4) << "); n=1 measure " << fmt(measure) << " in ["
             << fmt(r1.measure_bounds.lower) << ", " << fmt(r1.measure_bounds.upper) << "], " << fmt(t, 3) << " s";
    o.check(r50.empirical_prob >= 0.9, "typical probability >= 0.9 at n = 50");
    o.check(std::abs(r50.empirical_prob - clt) <= 4.0 * r50.std_error + 0.01, "agrees with normal approximation");
    o.check(measure >= r1.measure_bounds.lower && measure <= r1.measure_bounds.upper, "n = 1 sandwich");
    o.check(t < 60.0, "runtime < 60 s");
}

void criterion8(Outcome& o) {
    const RectifiableSource u = source_by_name("circle:uniform");
    double worst = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const CodewordReport r = verify_codeword_bounds(u, 2.0 * kPi / std::ldexp(1.0, k));
        worst = std::max(worst, std::abs(r.L_star_bits - r.lower_bits));
    }
    const CodewordReport vm = verify_codeword_bounds(source_by_name("circle:vonmises:1"), 2.0 * kPi / 64.0);
    o.detail << "dyadic max |L* - lower| " << fmt(worst, 3) << " bits; von Mises L* " << fmt(vm.L_star_bits)
             << " in [" << fmt(vm.lower_bits) << ", " << fmt(vm.upper_bits) << "]";
    o.check(worst <= 1e-9, "dyadic lengths equal the lower bound");
    o.check(vm.L_star_bits >= vm.lower_bits && vm.L_star_bits <= vm.lower_bits + 1.05, "von Mises within bounds");
}

void criterion9(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const SupportAtlas circle = unit_circle_support();
    const Distortion d = squared_error();
    double worst = 0.0;
    for (double s : {1.0, 10.0, 50.0, 500.0}) {
        const GammaPoint g = gamma_of_s(circle, d, s);
        const auto ref = oracle::brute_force_gamma(s);
        worst = std::max(worst, std::abs(g.gamma / std::exp(ref.log_gamma) - 1.0));
    }
    const double g0 = gamma_of_s(circle, d, 0.0).gamma;
    bool decreasing = true;
    double prev = g0;
    for (double s : log_space(0.01, 5000.0, 50)) {
        const double g = gamma_of_s(circle, d, s).gamma;
        decreasing = decreasing && g < prev;
        prev = g;
    }
    const double t = seconds_since(t0);
    o.detail << "max relative deviation from grid oracle " << fmt(worst, 3) << ", gamma(0) - 2pi "
             << fmt(g0 - 2.0 * kPi, 3) << ", " << fmt(t, 3) << " s";
    o.check(worst <= 1e-6, "grid oracle within 1e-6");
    o.check(std::abs(g0 - 2.0 * kPi) <= 1e-9, "gamma(0) = 2pi");
    o.check(decreasing, "strictly decreasing on [0.01, 5000]");
    o.check(t < 120.0, "runtime < 2 min");
}

void criterion10(Outcome& o) {
    const SlbSweepPoint best = maximize_slb(kLog2Pi, 0.01, unit_circle_support(), squared_error(), 1.0, 94.0);
    o.detail << "argmax s " << fmt(best.s, 6) << ", max R_SLB " << fmt(best.R, 10) << " (golden " << fmt(kSlbGolden, 10)
             << ")";
    o.check(best.s >= 40.0 && best.s <= 60.0, "argmax in [40, 60]");
    o.check(std::abs(best.R - kSlbGolden) <= 1e-6, "matches golden value");
}

void criterion11(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> d_grid = log_space(5e-5, 1.0, 60);
    d_grid.push_back(0.01);
    std::sort(d_grid.begin(), d_grid.end());
    const SlbCurve curve =
        slb_envelope(kLog2Pi, unit_circle_support(), squared_error(), d_grid, log_space(0.01, 1e6, 300));
    double min_gap = 1e300;
    double gap_01 = std::nan("");
    bool valid = true;
    try {
        for (const auto& r : gap_report(curve, rd_upper_curve(1024))) {
            min_gap = std::min(min_gap, r.gap);
            if (r.D == 0.01) gap_01 = r.gap;
        }
    } catch (const std::exception& e) {
        valid = false;
        o.detail << e.what() << "; ";
    }
    const double t = seconds_since(t0);
    o.detail << "min gap " << fmt(min_gap, 4) << ", gap at D = 0.01 " << fmt(gap_01, 4) << " nat, " << fmt(t, 3)
             << " s";
    o.check(valid && min_gap >= -1e-9, "lower <= upper on [5e-5, 1]");
    o.check(gap_01 <= 0.25, "gap at D = 0.01 <= 0.25 nat");
    o.check(t < 300.0, "runtime < 5 min");
}

void criterion12(Outcome& o) {
    const double d1 = rd_upper_bound(1).D_bar;
    const double d2 = rd_upper_bound(2).D_bar;
    o.detail << "D1 " << fmt(d1) << ", D2 " << fmt(d2);
    o.check(d1 == 1.0, "D1 = 1");
    o.check(std::abs(d2 - (1.0 - 4.0 / (kPi * kPi))) <= 1e-12, "D2 = 1 - 4/pi^2");
    for (std::size_t n : {2u, 8u, 64u}) {
        const ArcQuantizerDistortion mc = arc_quantizer_distortion(n, 1000000, 42);
        const double dn = rd_upper_bound(n).D_bar;
        o.detail << "; n=" << n << " mc " << fmt(mc.mean, 7) << " vs " << fmt(dn, 7);
        o.check(std::abs(mc.mean - dn) <= 3.0 * mc.std_error, "arc quantizer n = " + std::to_string(n));
    }
}

std::string run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "rectent");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::to_string(status) + "\n" + out.str();
}

std::string slurp_dir(const std::filesystem::path& dir) {
    std::string all;
    for (const char* f : {"gammas.csv", "slb_d01.csv", "envelope.csv", "upper.csv", "gaps.csv"}) {
        std::ifstream in(dir / f, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        all += std::string(f) + "\n" + s.str();
    }
    return all;
}

void criterion13(Outcome& o) {
    const std::vector<std::vector<std::string>> commands = {
        {"entropy", "--source", "circle:vonmises:1", "--method", "monte_carlo", "--samples", "50000"},
        {"marginal", "--source", "circle:uniform", "--coords", "2"},
        {"chain", "--source", "circle:uniform", "--coords", "2"},
        {"mi", "--source", "embed:normal:1:1", "--with", "embed:normal:1:1", "--joint", "gauss2:0.5"},
        {"aep", "--source", "circle:vonmises:1", "--n", "50", "--trials", "2000"},
        {"code", "--source", "circle:vonmises:1"},
        {"gamma"},
        {"slb"},
        {"envelope"},
        {"rdupper"},
    };
    std::size_t identical = 0;
    for (const auto& cmd : commands) {
        const std::string a = run_cli(cmd);
        const std::string b = run_cli(cmd);
        o.check(a == b && a.rfind("0\n", 0) == 0, cmd[0]);
        identical += a == b;
    }
    const auto base = std::filesystem::temp_directory_path() / "rectent_acceptance_figures";
    std::string runs[2];
    for (int i = 0; i < 2; ++i) {
        const auto dir = base / std::to_string(i);
        std::filesystem::create_directories(dir);
        runs[i] = run_cli({"figures", "--out", dir.string()}) + slurp_dir(dir);
    }
    std::filesystem::remove_all(base);
    o.check(runs[0] == runs[1], "figures");
    identical += runs[0] == runs[1];
    o.detail << identical << "/" << commands.size() + 1 << " subcommands byte-identical across two runs";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, Criterion>> criteria = {
        {"1 unit-circle entropy", criterion1},
        {"2 marginal entropy via coarea", criterion2},
        {"3 chain rule with Jacobian correction", criterion3},
        {"4 subadditivity counterexample and product pairs", criterion4},
        {"5 rank-one Wishart entropy", criterion5},
        {"6 independence additivity", criterion6},
        {"7 typical set", criterion7},
        {"8 codeword-length bounds", criterion8},
        {"9 gamma(s)", criterion9},
        {"10 Shannon lower bound at D = 0.01", criterion10},
        {"11 envelope vs upper bound", criterion11},
        {"12 n-arc upper bound points", criterion12},
        {"13 CLI determinism", criterion13},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
