#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace crowdplay {

/// SplitMix64 finalizer. Used to turn (seed, stream index) pairs into
/// well-separated engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a seed for an independent sub-experiment (a check in a validation
/// suite, say) from a user seed and a domain tag.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t domain) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(domain + 0x5851f42d4c957f2dULL));
}

/// xoshiro256** (Blackman and Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256StarStar {
public:
  using result_type = std::uint64_t;

  /// Fills the state from a SplitMix64 sequence started at `seed`.
  explicit Xoshiro256StarStar(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

private:
  std::array<std::uint64_t, 4> state_;
};

/// A reproducible random stream indexed by (seed, stream). Each Monte Carlo
/// trial gets its own stream so results do not depend on how trials are
/// scheduled across threads.
///
/// Uniforms and exponentials are derived here rather than through std::
/// distributions, whose algorithms vary between standard libraries.
class RandomStream {
public:
  static constexpr std::string_view generator_name =
      "xoshiro256** seeded by splitmix64(seed, trial)";

  RandomStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Exponential with the given rate (> 0).
  double exponential(double rate);
  bool bernoulli(double probability);

private:
  Xoshiro256StarStar engine_;
};

}  // namespace crowdplay
