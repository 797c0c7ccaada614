#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rectent::cli {

enum class Command { entropy, marginal, chain, mi, aep, code, gamma, slb, envelope, rdupper, figures };

enum class Format { csv, table };

struct RunConfig {
    Command command = Command::entropy;
    std::string source = "circle:uniform";
    /// Second source of `mi`; `joint` is optional (independent pair otherwise).
    std::string with;
    std::string joint;
    /// 0-based ambient coordinates (the command line takes them 1-based).
    std::vector<int> coords = {1};
    std::string method = "quadrature";
    /// Defaults to 2 pi / 64.
    std::optional<double> delta;
    /// Defaults to 0.1 for aep and 0.05 for code.
    std::optional<double> epsilon;
    std::optional<std::size_t> n;
    std::size_t n_max = 1024;
    double d = 0.01;
    double d_min = 5e-5;
    double d_max = 1.0;
    std::size_t d_points = 60;
    std::optional<double> s_min;
    std::optional<double> s_max;
    std::optional<std::size_t> s_points;
    std::uint64_t seed = 42;
    std::size_t samples = 100000;
    std::size_t trials = 10000;
    double tol = -1.0;
    std::string out;
    Format format = Format::csv;
    bool bits = false;
};

/// Runs one command, writing results to `out` (or to files for `figures` and
/// when config.out is set) and diagnostics to `err`. Returns 0 on success, 1
/// on a numerical failure and 2 on a usage error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and runs; usage errors return 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rectent::cli
