#pragma once

#include <cstdint>
#include <random>

namespace hookfit {

// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Child seed for task (stream, index) under a master seed:
//   splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index)
// Replicate r of grid cell c in a simulation study uses derive_seed(seed, c, r),
// so results never depend on which thread ran the task.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

inline constexpr std::uint64_t kDefaultSeed = 20150101;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on the open interval (0, 1), built from the top 53 bits so the
  // stream is identical across standard library implementations.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hookfit
