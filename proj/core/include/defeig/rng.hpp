#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "defeig/types.hpp"

namespace defeig {

/// Counter-based random stream keyed by a 64-bit value.
///
/// The i-th output is a SplitMix64 finalization of key + i * golden, so a
/// stream is fully determined by (key, position). Independent substreams are
/// derived by hashing a label into the key, which lets recursive or parallel
/// callers draw reproducibly without sharing generator state.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(Seed seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGolden * ++counter_); }

  /// Substream identified by `label`; does not advance this stream.
  RandomStream substream(std::uint64_t label) const {
    RandomStream child(0);
    child.key_ = mix(key_ ^ mix(label + 0x9e3779b97f4a7c15ULL));
    return child;
  }

  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  /// Standard complex Gaussian N_C(0,1): real and imaginary parts each N(0, 1/2).
  Complex complex_normal();

  std::uint64_t key() const { return key_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Well-known substream labels so that independent draws never collide.
namespace streams {
inline constexpr std::uint64_t kPerturbA = 1;
inline constexpr std::uint64_t kPerturbB = 2;
inline constexpr std::uint64_t kGridOffset = 3;
inline constexpr std::uint64_t kSolver = 4;
inline constexpr std::uint64_t kGenerator = 5;
}  // namespace streams

/// Matrix with i.i.d. N_C(0, variance) entries.
Matrix complex_gaussian(Index rows, Index cols, RandomStream& rng, double variance = 1.0);

}  // namespace defeig
