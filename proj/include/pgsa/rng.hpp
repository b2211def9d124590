#pragma once

#include <cstdint>
#include <random>

namespace pgsa {

/// Deterministic random stream. Uniform doubles are produced directly from
/// the 64-bit engine output so sequences are identical across platforms
/// (std::uniform_real_distribution is implementation-defined).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  /// Uniform draw in [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform draw in the open interval (0,1); safe for inverse-CDF maps.
  double uniform_open() {
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return u;
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
  }

  /// Child stream for a labelled sub-task; independent of draw order in the
  /// parent, so parallel consumers stay reproducible.
  static RandomStream split(std::uint64_t seed, std::uint64_t stream_id) {
    return RandomStream(splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1))));
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 eng_;
};

}  // namespace pgsa
