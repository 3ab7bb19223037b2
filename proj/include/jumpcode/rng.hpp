#pragma once

#include <cstdint>
#include <random>

namespace jumpcode {

/// splitmix64 step, used to decorrelate per-stream seeds derived from one
/// user seed. Standard constants from Steele et al.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic uniform generator. std::uniform_real_distribution is
/// implementation-defined, so doubles are built directly from raw
/// mt19937_64 words; results are bit-identical across platforms.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in the open interval (0, 1).
  double u01() {
    const std::uint64_t x = engine_();
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform double in (-1, 1).
  double symmetric() { return 2.0 * u01() - 1.0; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Seed for the i-th independent stream of a run. Streams are decorrelated
/// through splitmix64 so that any partition of work across workers draws
/// the same per-stream sequences.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

}  // namespace jumpcode
