#ifndef SEMIHOL_RNG_HPP
#define SEMIHOL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace semihol {

// SplitMix64: a splittable counter-based generator.  The state advances by a
// fixed Weyl increment, so output n is a pure function of (seed, n) and
// independent streams are derived by hashing the stream index into the seed.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Independent stream for (seed, stream_index).
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(seed ^ mix(index + 0x632BE59BD9B4E019ULL));
  }

  std::uint64_t operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ULL; }

  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

 private:
  std::uint64_t state_;
};

// Uniform in [0,1) with 53 significant bits.
inline double uniform01(SplitMix64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

inline double uniform_in(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline double exponential(SplitMix64& rng, double rate) {
  double u;
  do { u = uniform01(rng); } while (u <= 0.0);
  return -std::log(u) / rate;
}

// Sorted Poisson(rate per unit length) points on [0, len) via exponential gaps.
inline std::vector<double> poisson_points(SplitMix64& rng, double rate, double len,
                                          std::vector<double>* out = nullptr) {
  std::vector<double> local;
  std::vector<double>& pts = out ? *out : local;
  pts.clear();
  if (rate <= 0.0 || len <= 0.0) return pts;
  double t = exponential(rng, rate);
  while (t < len) {
    pts.push_back(t);
    t += exponential(rng, rate);
  }
  return pts;
}

inline std::uint64_t uniform_index(SplitMix64& rng, std::uint64_t n) {
  // Modulo bias is negligible for n << 2^64 at desk scale.
  return rng() % n;
}

}  // namespace semihol

#endif
