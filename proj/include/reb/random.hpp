#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace reb {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; used to decorrelate derived seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) noexcept {
    return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
    return derive_seed(derive_seed(a, b), c);
}

/// FNV-1a; gives each policy label a stable stream id independent of list order.
constexpr std::uint64_t stream_id(std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline double standard_normal(Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform01(Rng& rng) {
    return std::generate_canonical<double, 53>(rng);
}

inline double sample_beta(double alpha, double beta, Rng& rng) {
    const double x = std::gamma_distribution<double>(alpha, 1.0)(rng);
    const double y = std::gamma_distribution<double>(beta, 1.0)(rng);
    return x / (x + y);
}

}  // namespace reb
