#ifndef CHOMET_RNG_HPP
#define CHOMET_RNG_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace chomet {

/// splitmix64 finalizer; used to spread seeds before they reach the engine.
inline std::uint64_t mix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent named stream from a master seed, so that e.g. the
/// quantizer stream of one algorithm never shifts the timeline stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : stream) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(mix64(master) ^ h);
}

/// Thin wrapper over mt19937_64 with its own bit-to-double mapping.
/// std::uniform_real_distribution is implementation-defined, which would
/// break byte-identical output across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n)
  {
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = engine_();
    while (r >= limit) r = engine_();
    return static_cast<std::size_t>(r % bound);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chomet

#endif  // CHOMET_RNG_HPP
