#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qattack {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for a tuple like (master, generation, index, purpose).
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(master);
  for (auto p : parts) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

// Tags so streams drawn for different jobs never collide.
namespace seed_tag {
inline constexpr std::uint64_t kDetect = 1;
inline constexpr std::uint64_t kTargets = 2;
inline constexpr std::uint64_t kAttack = 3;
inline constexpr std::uint64_t kInit = 4;
inline constexpr std::uint64_t kOperators = 5;
inline constexpr std::uint64_t kFitness = 6;
inline constexpr std::uint64_t kEvaluate = 7;
inline constexpr std::uint64_t kTrial = 8;
inline constexpr std::uint64_t kExhaustive = 9;
}  // namespace seed_tag

template <class Int>
Int uniform_index(Rng& rng, Int n) {
  return std::uniform_int_distribution<Int>(0, n - 1)(rng);
}

}  // namespace qattack
