#pragma once

#include "solvaq/sampling/rng.hpp"

#include <bit>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace solvaq::sampling {

using Bits = std::uint64_t;
inline constexpr int kMaxOrbitals = 32;

inline int popcount(Bits b) { return std::popcount(b); }
inline Bits orbital_mask(int n_orb) { return n_orb >= 64 ? ~0ULL : (Bits{1} << n_orb) - 1; }

/// One measurement outcome: alpha and beta occupation words, bit p = orbital p.
struct Configuration {
  Bits alpha = 0;
  Bits beta = 0;
  auto operator<=>(const Configuration&) const = default;
};

/// Multiset of configurations.
class SampleSet {
 public:
  explicit SampleSet(int n_orb = 0);

  int n_orb() const noexcept { return n_orb_; }
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  std::size_t unique() const noexcept { return counts_.size(); }
  const std::map<Configuration, std::uint64_t>& counts() const noexcept { return counts_; }

  /// Adds count (>= 1) shots; throws DomainError for bits beyond n_orb.
  void add(const Configuration& c, std::uint64_t count = 1);
  void merge(const SampleSet& other);
  /// Every shot expanded in map order.
  std::vector<Configuration> expand() const;

  bool operator==(const SampleSet&) const = default;

 private:
  int n_orb_;
  std::uint64_t total_ = 0;
  std::map<Configuration, std::uint64_t> counts_;
};

struct NoiseModel {
  double flip_probability = 0.0;
  std::uint64_t seed = 0;
  void validate() const;
};

/// Inverse-CDF sampling of |c_I|^2 over the listed determinants.
/// Throws DomainError when the vector is not normalized to 1e-10.
SampleSet sample_exact(int n_orb, std::span<const Configuration> determinants,
                       std::span<const double> amplitudes, std::uint64_t n_shots,
                       std::uint64_t seed);

/// Independent bit flips on all 2 n_orb bits of every shot.
SampleSet apply_noise(const SampleSet& samples, const NoiseModel& noise);

/// "ALPHA BETA COUNT" records, orbital 0 rightmost in each block, after an
/// "n_orb=N" header. '#' starts a comment.
SampleSet parse_samples(std::istream& in);
SampleSet read_samples(const std::string& path);
void write_samples(const SampleSet& samples, std::ostream& out);
void write_samples(const SampleSet& samples, const std::string& path);

std::string to_bitstring(Bits bits, int n_orb);
Bits from_bitstring(const std::string& text);

}  // namespace solvaq::sampling
