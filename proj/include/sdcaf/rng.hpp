#pragma once

#include <cstdint>
#include <random>

namespace sdcaf {

// Stream tags: every source of randomness in a run gets its own engine,
// so e.g. changing the spread policy never perturbs the reward sample path.
enum class Stream : std::uint64_t {
  reward = 0x72657761726473ULL,  // "rewards"
  spread = 0x73707265616473ULL,  // "spreads"
  policy = 0x706f6c69637900ULL,  // "policy"
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent engine from (master seed, replication id, stream tag).
inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t replication,
                                   Stream stream) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ replication);
  s = splitmix64(s ^ static_cast<std::uint64_t>(stream));
  return std::mt19937_64(s);
}

// Uniform double in [0,1) from the top 53 bits; exactly one engine draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sdcaf
