#pragma once

#include <cstdint>

// Counter-based randomness. Every random decision in the toolkit is a pure
// function of (seed, stream, counters...), so results are identical for any
// thread count or evaluation order. Streams separate independent consumers
// (negative sampling vs. bit flips vs. split shuffling) so they never share
// a counter space.

namespace binder::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; bijective on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

enum class Stream : std::uint64_t {
  kNegatives = 0xa3c59ac1f39b0b01ULL,
  kFlips = 0xb7e151628aed2a6bULL,
  kSplit = 0xc2b2ae3d27d4eb4fULL,
  kGenerator = 0xd6e8feb86659fd93ULL,
  kTest = 0xe4f1d5c3a2b09187ULL,
};

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h + kGolden + v);
}

template <class... Counters>
constexpr std::uint64_t key(std::uint64_t seed, Stream stream, Counters... counters) {
  std::uint64_t h = mix64(seed + kGolden + static_cast<std::uint64_t>(stream));
  ((h = combine(h, static_cast<std::uint64_t>(counters))), ...);
  return h;
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Maps a uniform 64-bit value to [0, n) by multiply-shift. The bias is
// n / 2^64 and irrelevant at any realistic vocabulary size.
constexpr std::uint64_t bounded(std::uint64_t h, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(h) * static_cast<unsigned __int128>(n)) >> 64);
}

}  // namespace binder::rng
