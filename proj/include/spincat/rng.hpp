#pragma once

#include <cstdint>
#include <limits>

namespace spincat {

/// SplitMix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Small counter-based generator satisfying UniformRandomBitGenerator.
/// Streams are addressed by (master seed, point, trial) so results do not
/// depend on which worker draws them.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(mix64(seed)) {}

  static Rng stream(std::uint64_t master, std::uint64_t point,
                    std::uint64_t trial = 0) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ (point * 0xd1b54a32d192ed03ULL));
    s = mix64(s ^ (trial * 0x8cb92ba72f3d8dd7ULL + 0x632be59bd9b4e019ULL));
    return Rng(s);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace spincat
