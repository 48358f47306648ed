#pragma once

#include <cstdint>
#include <random>

namespace kappadetect {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a parent seed and a path of
/// integers, e.g. derive_seed(seed, trial, k). Order of the path matters.
template <class... Parts>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Parts... parts) noexcept {
    std::uint64_t h = mix64(seed);
    ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(parts) + 0x632be59bd9b4e019ULL))), ...);
    return h;
}

// Stream tags keep seeds for different purposes apart.
namespace stream {
inline constexpr std::uint64_t kRestart = 0x7265737461727431ULL;
inline constexpr std::uint64_t kProfile = 0x70726f66696c6531ULL;
inline constexpr std::uint64_t kAugment = 0x6175676d656e7431ULL;
inline constexpr std::uint64_t kRun = 0x72756e3031323334ULL;
inline constexpr std::uint64_t kSplit = 0x73706c6974303132ULL;
inline constexpr std::uint64_t kSubsample = 0x73756273616d706cULL;
}  // namespace stream

}  // namespace kappadetect
