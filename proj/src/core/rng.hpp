#pragma once

#include <cstdint>
#include <vector>

namespace hybridloc {

// Deterministic random numbers, pinned to a public algorithm so that every
// value in a dataset or experiment can be regenerated from its seed alone,
// in any language.
//
// Generator: SplitMix64 (Steele, Lea & Flood; public domain reference
// implementation). State is a single uint64. One draw is
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Derived quantities:
//   uniform01()   = ((next() >> 11) + 1) * 2^-53, a double in (0, 1]
//   gaussian()    = sqrt(-2 ln u1) * cos(2 pi u2), u1 = uniform01(),
//                   u2 = uniform01() (Box-Muller, cosine branch only;
//                   exactly two raw draws per gaussian)
//   bounded(n)    = high 64 bits of next() * n (multiply-shift mapping
//                   onto {0, ..., n-1})
//   shuffle(v)    = Fisher-Yates: for i = len-1 down to 1,
//                   swap(v[i], v[bounded(i+1)])
//
// Stream splitting: independent streams are derived by hashing, never by
// sharing a state. With derive(x, v) = finalize((x ^ v) + 0x9E3779B97F4A7C15)
// (finalize = the three mixing lines above), the stream for purpose p and
// indices (a, b) starts from
//
//   stream_seed(seed, p, a, b) = derive(derive(derive(seed, p), a), b)
//
// Purposes used by this library: kStreamSimulate = 1 with (technology
// index, grid-point index); kStreamSplit = 2 with (repetition index, 0).

inline constexpr std::uint64_t kStreamSimulate = 1;
inline constexpr std::uint64_t kStreamSplit = 2;

class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return finalize(state_);
  }

  // Uniform double in (0, 1].
  double uniform01() {
    return static_cast<double>((next() >> 11) + 1) * 0x1p-53;
  }

  // Standard normal draw; consumes exactly two raw values.
  double gaussian();

  // Uniform integer in {0, ..., n-1}; n > 0.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i-- > 1;) {
      std::size_t j = static_cast<std::size_t>(bounded(i + 1));
      std::swap(v[i], v[j]);
    }
  }

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive(std::uint64_t x, std::uint64_t v) {
    return finalize((x ^ v) + 0x9E3779B97F4A7C15ULL);
  }

  static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t purpose,
                                   std::uint64_t a, std::uint64_t b) {
    return derive(derive(derive(seed, purpose), a), b);
  }

private:
  std::uint64_t state_;
};

}  // namespace hybridloc
