#include "bicorpus/random.hpp"

#include <limits>

#include "bicorpus/hash.hpp"

namespace bicorpus {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index) {
  std::uint64_t h = hash64(label, seed);
  return mix64(h ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::uniform(std::uint64_t n) {
  // Rejection sampling keeps the result unbiased for any n.
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return x % n;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(uniform(span));
}

}  // namespace bicorpus
