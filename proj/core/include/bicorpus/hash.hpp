#pragma once

#include <cstdint>
#include <string_view>

namespace bicorpus {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t state = kFnvOffset) noexcept {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= kFnvPrime;
  }
  return state;
}

// Seeded 64-bit string hash; stable across platforms and runs.
constexpr std::uint64_t hash64(std::string_view bytes, std::uint64_t seed) noexcept {
  return mix64(fnv1a64(bytes, kFnvOffset ^ mix64(seed)));
}

}  // namespace bicorpus
