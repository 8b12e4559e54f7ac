#ifndef PCGOPT_RNG_HPP
#define PCGOPT_RNG_HPP

// Platform-deterministic random streams: splitmix64 for seeding, xoshiro256**
// for generation, Box-Muller for normals. Nothing here depends on <random>
// distributions, whose output is implementation defined.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace pcgopt {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of the i-th independent substream of a master seed.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) noexcept {
  SplitMix64 sm(master ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return sm.next();
}

class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& s : s_) s = sm.next();
  }

  std::uint64_t next() noexcept {
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

  /// Uniform on (0, 1].
  double uniform_open0() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

/// Standard normal variates by the Box-Muller transform; the second value of
/// each pair is cached.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) noexcept : gen_(seed) {}

  double next() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = gen_.uniform_open0();
    const double u2 = gen_.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  std::vector<double> vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = next();
    return v;
  }

 private:
  Xoshiro256 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pcgopt

#endif  // PCGOPT_RNG_HPP
