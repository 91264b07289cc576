#pragma once

#include <cstdint>
#include <initializer_list>

namespace solvaq::sampling {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the n-th draw is mix64(key + n * golden), so a
/// stream is fully described by (key, counter) and can be split without
/// sharing state.
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit Rng(std::uint64_t key = 0) : key_(key) {}

  std::uint64_t operator()() { return mix64(key_ + (++counter_) * kGolden); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n) by rejection (n > 0).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Child seed for a purpose path, e.g. derive_seed(master, {kRecover, iteration}).
/// Different paths give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Purpose tags used as the first element of derive_seed paths.
enum SeedPurpose : std::uint64_t {
  kSeedSampler = 1,
  kSeedNoise = 2,
  kSeedRecover = 3,
  kSeedBatches = 4,
};

}  // namespace solvaq::sampling
