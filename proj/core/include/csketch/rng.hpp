#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace csketch {

/// Portable random source.
///
/// std::mt19937_64 has a fully specified output sequence, but the standard
/// distributions do not, so uniform and Gaussian variates are derived here
/// with fixed algorithms. Streams are therefore identical across compilers
/// and standard libraries given the same seed.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/u53/marsaglia-polar/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on the open interval (lo, hi).
  double uniform_open(double lo, double hi);

  double normal();

  /// Uniform index in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; maps (seed, stream) to a decorrelated child seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace csketch
