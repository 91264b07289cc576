#pragma once

#include "solvaq/chem/basis.hpp"
#include "solvaq/chem/geometry.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace solvaq::chem {

using Matrix = Eigen::MatrixXd;

/// Packed index of the unordered pair (i, j).
constexpr std::size_t pair_index(std::size_t i, std::size_t j) {
  return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
}

/// Two-electron repulsion integrals (pq|rs), chemists' notation, stored once
/// per canonical quadruple (8-fold permutational symmetry).
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(int n);

  int n() const noexcept { return n_; }
  double operator()(int p, int q, int r, int s) const {
    return data_[index(p, q, r, s)];
  }
  void set(int p, int q, int r, int s, double v) { data_[index(p, q, r, s)] = v; }
  /// Element of the packed storage by pair indices pq >= rs.
  double packed(std::size_t pq, std::size_t rs) const { return data_[pair_index(pq, rs)]; }
  std::size_t n_pairs() const noexcept { return n_pairs_; }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t index(int p, int q, int r, int s) const {
    return pair_index(pair_index(static_cast<std::size_t>(p), static_cast<std::size_t>(q)),
                      pair_index(static_cast<std::size_t>(r), static_cast<std::size_t>(s)));
  }
  int n_ = 0;
  std::size_t n_pairs_ = 0;
  std::vector<double> data_;
};

struct OneElectronIntegrals {
  Matrix overlap;
  Matrix kinetic;
  Matrix nuclear;  // attraction, includes the -Z factors
  double nuclear_repulsion = 0.0;
  Matrix core_hamiltonian() const { return kinetic + nuclear; }
};

struct IntegralSet {
  Matrix overlap;
  Matrix kinetic;
  Matrix nuclear;
  EriTensor eri;
  double nuclear_repulsion = 0.0;
  Matrix core_hamiltonian() const { return kinetic + nuclear; }
};

inline constexpr int kDefaultEriCap = 64;

OneElectronIntegrals compute_one_electron(const AOBasis& basis, const Geometry& geometry);

/// Throws CapacityError when n_ao exceeds max_ao.
EriTensor compute_eri(const AOBasis& basis, int max_ao = kDefaultEriCap);

IntegralSet compute_integrals(const AOBasis& basis, const Geometry& geometry,
                              int max_ao = kDefaultEriCap);

/// <mu| 1/|r - point| |nu>, a positive-definite kernel (no charge sign).
Matrix esp_integrals(const AOBasis& basis, const Vec3& point);

/// Coulomb and exchange matrices J_pq = sum_rs (pq|rs) P_rs, K_pq = sum_rs (pr|qs) P_rs.
Matrix coulomb_matrix(const EriTensor& eri, const Matrix& density);
Matrix exchange_matrix(const EriTensor& eri, const Matrix& density);

}  // namespace solvaq::chem
