#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace mind {

/// Seedable random source with platform-independent output.
///
/// Raw bits come from std::mt19937_64, whose sequence is fixed by the
/// standard. The standard distributions are implementation-defined, so the
/// conversions below are written out explicitly:
///   uniform01   top 53 bits of one draw scaled by 2^-53, in [0, 1)
///   below(n)    rejection sampling on the top bits, no modulo bias
///   normal      Marsaglia polar method, second variate discarded
/// Any port that reproduces these three rules reproduces every dataset,
/// fold partition and prototype sample of the toolkit bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t below(std::uint64_t n);
  double normal(double mean, double stddev);

  /// Fisher-Yates, walking from the back.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and a sub-stream
/// index (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace mind
