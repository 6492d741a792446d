#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace goupillaud {

/// One step of SplitMix64: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed of the independent stream `stream` under `master`.
///
/// stream_seed(m, s) = splitmix64 applied to (splitmix64(m) XOR (s * golden)),
/// where golden = 0x9E3779B97F4A7C15. Replica r of a Monte Carlo run uses
/// stream_seed(master_seed, r), so its path does not depend on which worker
/// draws it or in which order replicas run.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in (0, 1], 53 random bits.
  double uniform_open0() noexcept;

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace goupillaud
