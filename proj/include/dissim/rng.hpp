#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <vector>

namespace dissim {

// Stream tags used to derive independent substreams from one master seed.
// Every consumer of randomness names its stream so that evaluation order and
// worker count can never perturb a result.
namespace stream {
inline constexpr std::uint64_t kWriterSplit = 1;
inline constexpr std::uint64_t kSelectSamples = 2;
inline constexpr std::uint64_t kTrainingPairs = 3;
inline constexpr std::uint64_t kCondense = 4;
inline constexpr std::uint64_t kSwarmInit = 5;
inline constexpr std::uint64_t kParticleUpdate = 6;
inline constexpr std::uint64_t kSvmEpoch = 7;
inline constexpr std::uint64_t kEvalBuild = 8;
inline constexpr std::uint64_t kGenerator = 10;
inline constexpr std::uint64_t kReplication = 11;
inline constexpr std::uint64_t kSwarm = 12;
}  // namespace stream

namespace detail {
// splitmix64 output scrambler (Vigna). Used for seeding and path derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// xoshiro256** seeded through a splitmix64 chain. Substreams are obtained by
// hashing (master seed, path...) so that streams with distinct paths are
// statistically independent no matter in which order they are consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { seed_from(detail::mix64(seed ^ 0x6a09e667f3bcc909ULL)); }

  Rng(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = detail::mix64(master ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t tag : path) h = detail::mix64(h ^ (tag + 0x9e3779b97f4a7c15ULL));
    seed_from(h);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Unbiased integer in [0, bound) via rejection sampling. bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller (no cached spare, keeps the stream simple).
  double next_normal() {
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  void seed_from(std::uint64_t h) {
    for (auto& word : s_) {
      h = detail::mix64(h);
      word = h;
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is invalid
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace dissim
