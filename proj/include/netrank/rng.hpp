#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace netrank {

/**
 * Seeded random stream with platform-stable output.
 *
 * The generator is std::mt19937_64, whose output sequence for a given seed
 * is fixed by the C++ standard.  All derived draws (uniforms, Bernoullis,
 * bounded integers) are implemented here rather than with std::*_distribution,
 * because the standard leaves distribution algorithms implementation-defined
 * and bitwise reproducibility across toolchains is part of the contract.
 *
 * A stream is exclusively owned by one caller at a time; concurrent use of
 * one stream is a data race by design (split independent streams instead,
 * see derive_stream_seed).
 */
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Next raw 64-bit word.
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Bernoulli(p) draw; consumes exactly one uniform.
  bool next_bernoulli(double p) { return next_uniform() < p; }

  /// Unbiased uniform integer in [0, bound) via rejection sampling.
  std::uint64_t next_below(std::uint64_t bound) {
    // Reject draws above the largest multiple of bound to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

// SplitMix64 finalizer: bijective mixing step with good avalanche behavior.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over a byte string; folds scenario names into the seed chain.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/**
 * Deterministic seed for the stream of one Monte Carlo replicate.
 *
 * Chains the master seed, a textual label (scenario name), the grid-point
 * index, and the replicate index through SplitMix64 mixing stages.  Streams
 * for distinct (label, point, replicate) triples are independent for all
 * practical purposes, so replicates can run in any order or in parallel and
 * still reproduce bit-identical results.
 */
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::string_view label,
                                        std::uint64_t point,
                                        std::uint64_t replicate) {
  std::uint64_t s = detail::splitmix64(master_seed ^ detail::fnv1a(label));
  s = detail::splitmix64(s ^ point);
  s = detail::splitmix64(s ^ (replicate + 0x51ed2701a9e5a3d5ULL));
  return s;
}

}  // namespace netrank
