#pragma once

#include <boost/random/exponential_distribution.hpp>

#include <cstdint>
#include <random>

namespace sara {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed so that drops, topologies and channels never share a stream.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept
{
    return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x632BE59BD9B4E019ULL));
}

// Stream tags for derive_seed.
enum class Stream : std::uint64_t {
    topology = 1,
    channel = 2,
    mac = 3,
    drop = 4,
    axioms = 5,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream s) noexcept
{
    return derive_seed(master, static_cast<std::uint64_t>(s));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) noexcept
{
    return uniform01(rng) < p;
}

// Unit-mean exponential variate (Rayleigh power fading), ziggurat method.
inline double unit_exponential(Rng& rng)
{
    return boost::random::exponential_distribution<double>{}(rng);
}

} // namespace sara
