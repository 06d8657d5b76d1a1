#pragma once

#include <cstdint>

namespace nhs {

/// SplitMix64 generator. Its output sequence is fully specified, so seeded
/// draws are identical across compilers and standard libraries (unlike
/// std::uniform_real_distribution).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Mixes a value into a seed; used to derive independent per-task seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t value) {
  Rng rng(seed ^ (value + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2)));
  return rng.next();
}

}  // namespace nhs
