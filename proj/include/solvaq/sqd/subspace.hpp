#pragma once

#include "solvaq/sampling/samples.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace solvaq::sqd {

using sampling::Bits;
using sampling::Configuration;
using sampling::SampleSet;
using Vector = Eigen::VectorXd;

/// Binomial coefficient; throws CapacityError on 64-bit overflow.
std::uint64_t binomial(int n, int k);

/// C(n_orb, n_alpha) * C(n_orb, n_beta); throws CapacityError on overflow.
std::uint64_t hilbert_dimension(int n_orb, int n_alpha, int n_beta);

/// Every n_orb-bit word of Hamming weight n_elec, ascending.
std::vector<Bits> all_strings(int n_orb, int n_elec);

struct OccupationDistribution {
  Vector up;
  Vector down;
};

/// Count-weighted mean occupation over the shots with exactly (n_alpha, n_beta).
/// Throws DomainError when no shot has the right particle numbers.
OccupationDistribution init_occupations(const SampleSet& samples, int n_alpha, int n_beta);

struct RecoveredSet {
  SampleSet samples;
  std::uint64_t corrected_shots = 0;
  std::uint64_t uniform_fallbacks = 0;  // flips drawn uniformly for lack of weight
};

/// Configuration recovery: each shot with a wrong Hamming weight in a spin
/// sector gets bits flipped one at a time until the weight is right. A bit is
/// chosen among those whose flip moves the weight toward the target with
/// probability proportional to |x_p - n_p|.
RecoveredSet recover(const SampleSet& samples, const OccupationDistribution& occ, int n_alpha,
                     int n_beta, std::uint64_t seed);

using Batch = std::vector<Configuration>;

/// K batches of batch_size shots, each drawn uniformly without replacement
/// from the multiset (with replacement when batch_size exceeds it).
std::vector<Batch> draw_batches(const SampleSet& recovered, int n_batches, std::size_t batch_size,
                                std::uint64_t seed);

/// Determinant space U x U over a sorted set U of same-weight strings.
/// Determinant (a, b) has index index(a) * size() + index(b).
class SubspaceBasis {
 public:
  SubspaceBasis(int n_orb, int n_elec, std::vector<Bits> strings);
  static SubspaceBasis full(int n_orb, int n_elec);

  int n_orb() const noexcept { return n_orb_; }
  int n_elec() const noexcept { return n_elec_; }
  std::size_t size() const noexcept { return strings_.size(); }
  std::size_t dimension() const noexcept { return strings_.size() * strings_.size(); }
  const std::vector<Bits>& strings() const noexcept { return strings_; }
  Bits string(std::size_t i) const { return strings_[i]; }
  /// Position of s in U, or -1.
  std::ptrdiff_t find(Bits s) const;
  bool contains(const Configuration& c) const { return find(c.alpha) >= 0 && find(c.beta) >= 0; }
  Configuration determinant(std::size_t index) const;
  std::vector<Configuration> determinants() const;

 private:
  int n_orb_;
  int n_elec_;
  std::vector<Bits> strings_;
};

/// U = sorted union of all alpha and beta strings of the batch.
/// Throws ConfigError unless n_alpha == n_beta.
SubspaceBasis build_subspace(const Batch& batch, int n_orb, int n_alpha, int n_beta);

}  // namespace solvaq::sqd
