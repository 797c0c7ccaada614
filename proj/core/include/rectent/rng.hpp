#pragma once

#include <cstdint>
#include <random>

namespace rectent {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Deterministic random stream.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// converts bits to doubles and normals itself, so a seed yields the same
/// stream on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform double in (0, 1).
    double uniform_open();
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    /// Standard normal variate (Box-Muller, second value cached).
    double normal();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace rectent
