#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace catlearn::knowledge {

/// Seeded generator with portable draws. The standard distributions are
/// implementation-defined, so draws are derived from raw engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Unbiased uniform index in [0, n). n must be positive.
    std::size_t index(std::size_t n);

    std::uint64_t next() { return engine_(); }

    /// Exact textual engine state, restorable with restore().
    std::string state() const;
    void restore(std::uint64_t seed, const std::string& state);

    bool operator==(const Rng& other) const {
        return seed_ == other.seed_ && engine_ == other.engine_;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Independent seed for a named sub-stream of `seed` (splitmix64 finalizer).
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream);

} // namespace catlearn::knowledge
