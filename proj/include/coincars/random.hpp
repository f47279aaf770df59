#pragma once

// Reproducible random streams.
//
// Realization i of master seed s draws from std::mt19937_64 seeded with
//   stream_seed(s, i) = splitmix64(splitmix64(s) ^ (i + 1) * 0x9E3779B97F4A7C15)
// and converts raw 64-bit outputs to doubles as (x >> 11) * 2^-53. Both
// steps are fully specified, so streams match across platforms and languages.

#include <cstdint>
#include <random>

namespace coincars {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return splitmix64(splitmix64(master) ^ ((index + 1) * 0x9E3779B97F4A7C15ULL));
}

class Stream {
public:
    Stream(std::uint64_t master, std::uint64_t index) : engine_(stream_seed(master, index)) {}
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

} // namespace coincars
