#pragma once

#include <cstdint>
#include <random>

namespace overrelax {

/// Bijective 64-bit mixing step (splitmix64 finalizer).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random-number stream.
///
/// A stream is identified by (seed, chain_index).  The engine seed is
/// splitmix64(seed ^ splitmix64(chain_index)): for a fixed master seed the
/// map chain_index -> engine seed is a bijection on 64-bit integers, so
/// distinct chains can never receive the same stream.  The engine is
/// std::mt19937_64, whose output sequence is fully specified by the
/// standard, so equal seeds give bit-identical sequences everywhere.
///
/// A stream must be owned by a single chain; it is not safe to share one
/// between concurrently running chains.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t chain_index = 0)
        : seed_(seed),
          chain_(chain_index),
          engine_(splitmix64(seed ^ splitmix64(chain_index))) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform variate strictly inside (0, 1), 53-bit resolution.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), n >= 1.  Single draw, no rejection loop.
    std::uint64_t uniform_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Fair coin.
    bool coin() { return (next_u64() >> 63) != 0; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t chain_index() const { return chain_; }

private:
    std::uint64_t seed_;
    std::uint64_t chain_;
    std::mt19937_64 engine_;
};

}  // namespace overrelax
