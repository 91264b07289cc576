#pragma once

#include "solvaq/active/active_space.hpp"
#include "solvaq/sqd/subspace.hpp"

#include <Eigen/Sparse>

#include <optional>
#include <vector>

namespace solvaq::sqd {

using Matrix = Eigen::MatrixXd;

/// a+_p a_q |source> = sign |target>, stored under the target string.
struct Excitation {
  std::uint32_t source;
  std::uint8_t p;
  std::uint8_t q;
  std::int8_t sign;
};

/// Single excitations (p == q included) that connect strings of U.
class ExcitationTable {
 public:
  explicit ExcitationTable(const SubspaceBasis& basis);

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  const Excitation* begin(std::size_t target) const { return entries_.data() + offsets_[target]; }
  const Excitation* end(std::size_t target) const { return entries_.data() + offsets_[target + 1]; }
  std::size_t entries() const noexcept { return entries_.size(); }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Excitation> entries_;
};

/// P H P on U x U. The same-spin blocks are exact Slater-Condon matrices over
/// U; the opposite-spin block uses the excitation table of each spin. The
/// constant e_frozen is not part of apply() or diagonal().
class ProjectedHamiltonian {
 public:
  ProjectedHamiltonian(const active::ActiveHamiltonian& h, const SubspaceBasis& basis,
                       const ExcitationTable& table);

  std::size_t dimension() const noexcept { return basis_.dimension(); }
  double constant() const noexcept { return constant_; }
  Vector apply(const Vector& c) const;
  const Vector& diagonal() const noexcept { return diagonal_; }
  /// Explicit d x d matrix, for small d only.
  Matrix dense() const;
  /// <c|H|c> + constant for a normalized c.
  double expectation(const Vector& c) const { return c.dot(apply(c)) + constant_; }

 private:
  double eri(int p, int q, int r, int s) const {
    return eri_[static_cast<std::size_t>(((p * n_ + q) * n_ + r) * n_ + s)];
  }

  const SubspaceBasis& basis_;
  const ExcitationTable& table_;
  int n_;
  double constant_;
  std::vector<double> eri_;  // dense (pq|rs)
  Eigen::SparseMatrix<double, Eigen::RowMajor> same_spin_;
  Vector diagonal_;
};

struct DavidsonOptions {
  double tolerance = 1e-8;      // residual 2-norm
  int max_subspace = 20;        // restart size
  int max_iterations = 2000;
  int stagnation_window = 50;   // expansions without residual decrease
  std::size_t dense_below = 0;  // dimensions up to this are diagonalized densely
};

struct EigenPair {
  double energy = 0.0;  // includes the constant
  Vector vector;        // normalized, largest component positive
  double residual = 0.0;
  int iterations = 0;
};

/// Lowest eigenpair of H, starting from guess when given, otherwise from the
/// determinant with the lowest diagonal element.
EigenPair davidson_ground_state(const ProjectedHamiltonian& h, const DavidsonOptions& options = {},
                                const std::optional<Vector>& guess = std::nullopt);

struct OneRDM {
  Matrix alpha;  // <a+_p a_q>
  Matrix beta;
  Matrix total() const { return alpha + beta; }
};

OneRDM one_rdm(const Vector& psi, const SubspaceBasis& basis, const ExcitationTable& table);

}  // namespace solvaq::sqd
