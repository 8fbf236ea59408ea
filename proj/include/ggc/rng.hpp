#ifndef GGC_RNG_HPP
#define GGC_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ggc {

namespace detail {

// Finalizer of the splitmix64 generator (Steele, Lea & Flood 2014). Bijective
// on 64-bit words, which is what makes stream separation collision-free.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

}  // namespace detail

/// Derives a per-stream seed from a master seed. The map is bijective in
/// stream_id for fixed master_seed, so distinct streams never collide.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
  return detail::mix64(master_seed + detail::mix64((stream_id + 1) * detail::kGolden));
}

/// Counter-based pseudo-random generator: word k of a stream is a fixed
/// mixing of (seed + k*golden). Sequential draws, no hidden state beyond
/// the counter, identical output for identical seeds on any thread.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return detail::mix64(seed_ + (++counter_) * detail::kGolden); }

  /// Uniform draw on (0, 1].
  double uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via the Box-Muller transform; one spare value cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ggc

#endif  // GGC_RNG_HPP
