#pragma once

#include <cstdint>
#include <random>

namespace uavbeam {

using RngEngine = std::mt19937_64;

// splitmix64 finalizer; good avalanche, cheap, and stable across platforms.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash_combine64(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 12) + (h >> 4)));
}

// Stream tags. Substreams are derived from (master_seed, tag, indices) only:
// never from theta or any other config value, so
//  - a trial replays bit-for-bit from its derived seed,
//  - extending the theta grid or rescaling P_t never perturbs existing draws,
//  - sweeps over theta share user drops and channels (common random numbers),
//    which keeps curve-shape comparisons out of the Monte Carlo noise floor.
inline constexpr std::uint64_t kStreamGeometry = 0x67656f6dULL;  // drop: count + positions
inline constexpr std::uint64_t kStreamChannel = 0x6368616eULL;   // per-user link randomness

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t i = 0, std::uint64_t j = 0) {
  std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
  h = hash_combine64(h, tag);
  h = hash_combine64(h, i);
  h = hash_combine64(h, j);
  return h;
}

inline RngEngine make_stream(std::uint64_t master, std::uint64_t tag,
                             std::uint64_t i = 0, std::uint64_t j = 0) {
  return RngEngine(derive_seed(master, tag, i, j));
}

}  // namespace uavbeam
