#include "goupillaud/random.hpp"

#include <bit>

namespace goupillaud {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  std::uint64_t a = master;
  std::uint64_t mixed = splitmix64(a) ^ (stream * 0x9E3779B97F4A7C15ULL);
  return splitmix64(mixed);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

Xoshiro256::result_type Xoshiro256::operator()() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform_open0() noexcept {
  return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace goupillaud
