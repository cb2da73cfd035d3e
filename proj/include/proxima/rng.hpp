#pragma once

#include "proxima/hash.hpp"

#include <cstdint>
#include <random>

namespace proxima {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream seed for trial `stream` under a base seed. Parallel
/// kernels use this so every trial draws the same numbers regardless of which
/// thread runs it.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Bytes random_bytes(Rng& rng, std::size_t n)
{
    Bytes out(n);
    for (std::size_t i = 0; i < n; i += 8) {
        std::uint64_t v = rng();
        for (std::size_t j = i; j < n && j < i + 8; ++j) {
            out[j] = static_cast<std::uint8_t>(v & 0xff);
            v >>= 8;
        }
    }
    return out;
}

inline double uniform01(Rng& rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace proxima
