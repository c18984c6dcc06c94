#pragma once

// Deterministic random streams.
//
// Every random quantity in the lab is drawn from an RngStream constructed
// from an explicit 64-bit seed. Child streams are derived from the parent's
// construction seed plus a tag (counter-based, independent of how much the
// parent has been consumed), so adding a new consumer never perturbs the
// streams of existing ones and work can be partitioned across workers with
// bit-identical results.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace rewardlab {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer; full avalanche on 64 bits.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += kGolden64;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// FNV-1a over bytes; used for string tags and content digests.
inline constexpr std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Counter-based seed derivation: fold each tag word through the mixer.
inline constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t w : words) s = mix64(s ^ mix64(w));
  return s;
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // N(0, sigma^2). Always consumes the same amount of stream state regardless
  // of sigma, so stream positions are independent of the noise configuration;
  // sigma = 0 yields exactly 0.0.
  double normal(double sigma = 1.0) { return sigma * std_normal_(engine_); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound); bound >= 1. Rejection-free modulo is fine
  // here: bounds are tiny (permutation indices) relative to 2^64.
  std::uint64_t uniform_index(std::uint64_t bound) { return engine_() % bound; }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Child derived from this stream's construction seed, not its current state.
  RngStream child(std::uint64_t tag) const { return RngStream(derive_seed(seed_, {tag})); }
  RngStream child(std::string_view tag) const { return child(fnv1a64(tag)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> std_normal_{0.0, 1.0};
};

}  // namespace rewardlab
