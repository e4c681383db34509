#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace kmpp {

/// SplitMix64 finalizer. Used to derive child seeds.
std::uint64_t splitmix64(std::uint64_t x);

/**
 * Seedable, platform-portable random source.
 *
 * The engine is `std::mt19937_64`, whose output sequence is fixed by the
 * standard. The standard distributions are not portable across library
 * implementations, so every derived variate (uniform double, bounded index,
 * standard normal) is computed here from raw 64-bit draws.
 *
 * Stream-split rule: `Rng::stream(master, {a, b, ...})` seeds a child engine with
 *
 *     s = splitmix64(master)
 *     s = splitmix64(s ^ splitmix64(a + 1))   for each key a in order
 *
 * Each Monte Carlo repetition gets its own child stream keyed by its
 * repetition index, so results do not depend on how repetitions are
 * scheduled across threads.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    static Rng stream(std::uint64_t master, std::initializer_list<std::uint64_t> keys);
    static std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform on {0, ..., n - 1}; n must be positive.
    std::size_t index(std::size_t n);

    /// Standard normal variate (Box-Muller, second value cached).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace kmpp
