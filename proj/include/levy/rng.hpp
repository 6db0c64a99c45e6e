#pragma once

// Derived random streams. Every stochastic component draws from a stream
// keyed by (seed, replica, component, index), so results do not depend on
// scheduling or on the number of worker threads.

#include <cstdint>
#include <random>

namespace levy {

using Rng = std::mt19937_64;

enum class StreamComponent : std::uint64_t {
  kWiener = 1,
  kPoisson = 2,
  kFunctionals = 3,
  kReducibility = 4,
  kAuxiliary = 5,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class StreamFactory {
 public:
  explicit StreamFactory(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  Rng derive(std::uint64_t replica, StreamComponent component, std::uint64_t index = 0) const {
    std::uint64_t h = splitmix64(seed_);
    h = splitmix64(h ^ replica);
    h = splitmix64(h ^ static_cast<std::uint64_t>(component));
    h = splitmix64(h ^ index);
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Rng(seq);
  }

 private:
  std::uint64_t seed_;
};

/// Uniform draw on (0, 1].
inline double uniform_open_closed(Rng& rng) {
  return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace levy
