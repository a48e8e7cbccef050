#pragma once

// Named, versioned random streams.
//
// Every random draw in the toolkit comes from a std::mt19937_64 engine whose
// seed is derived from (master seed, purpose tag, indices...). The derivation
// is a splitmix64 chain over the master seed, an FNV-1a hash of the tag, and
// each index in order. Changing the mixing scheme changes every artifact, so
// it is pinned under kStreamVersion.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace pacgen {

inline constexpr std::string_view kStreamVersion = "stream_v1";

namespace tags {
inline constexpr std::string_view kReal = "REAL";
inline constexpr std::string_view kGen = "GEN";
inline constexpr std::string_view kEs = "ES";
inline constexpr std::string_view kEval = "EVAL";
}  // namespace tags

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                    std::initializer_list<std::uint64_t> indices = {}) noexcept {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ fnv1a64(tag));
    for (std::uint64_t i : indices) h = splitmix64(h ^ splitmix64(i + 1));
    return h;
}

inline Rng make_stream(std::uint64_t master, std::string_view tag,
                       std::initializer_list<std::uint64_t> indices = {}) {
    return Rng(derive_seed(master, tag, indices));
}

// Portable draws. The std:: distributions are implementation-defined, so
// artifacts would differ between standard libraries.
double uniform01(Rng& rng);
double uniform(Rng& rng, double lo, double hi);
double standard_normal(Rng& rng);

}  // namespace pacgen
