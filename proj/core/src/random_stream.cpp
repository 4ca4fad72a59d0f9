#include "crowdplay/random_stream.hpp"

#include <bit>
#include <cmath>

namespace crowdplay {

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) noexcept {
  // Successive SplitMix64 outputs; never all zero.
  for (auto& word : state_) {
    word = splitmix64(seed);
    seed += 0x9e3779b97f4a7c15ULL;
  }
}

Xoshiro256StarStar::result_type Xoshiro256StarStar::operator()() noexcept {
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed) ^ splitmix64(splitmix64(stream) + 0x632be59bd9b4e019ULL)) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::exponential(double rate) {
  // 1 - U lies in (0, 1], so the log is finite.
  return -std::log1p(-uniform()) / rate;
}

bool RandomStream::bernoulli(double probability) { return uniform() < probability; }

}  // namespace crowdplay
