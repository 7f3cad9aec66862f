// Seeded, splittable pseudo-random generation shared by every simulation path.
//
// The generator is xoshiro256** (Blackman & Vigna), seeded by expanding a
// single 64-bit seed through splitmix64. Bounded integers use Lemire's
// multiply-shift rejection method, so draws are unbiased and identical on
// every platform. The algorithm identifier is written into sweep metadata.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <string_view>
#include <utility>

namespace smlab {

inline constexpr std::string_view kRngAlgorithm =
    "xoshiro256** seeded by splitmix64; bounded draws by Lemire rejection";

/// One splitmix64 step: advances `state` and returns the mixed output.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive hash of a tuple of words into the seed space. Used to give
/// every (master seed, n, iteration, ...) cell its own independent stream.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t state = 0x6a09e667f3bcc908ULL;
  std::uint64_t out = 0;
  for (std::uint64_t p : parts) {
    state ^= p;
    out = splitmix64(state);
    state = out;
  }
  return splitmix64(state);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
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

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Independent child generator for a named sub-stream.
  Rng split(std::uint64_t stream) noexcept {
    return Rng(derive_seed({(*this)(), stream}));
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Unbiased Fisher-Yates shuffle driven by `Rng::below`.
template <typename Range>
void shuffle(Range&& items, Rng& rng) {
  using std::swap;
  for (std::size_t i = std::size(items); i > 1; --i) {
    const std::size_t j = rng.below(i);
    swap(items[i - 1], items[j]);
  }
}

}  // namespace smlab
