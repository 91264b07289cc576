#include "solvaq/scf/rhf.hpp"

#include "solvaq/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace solvaq::scf {

void SCFConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("SCF max iterations must be >= 1");
  if (!(energy_tolerance > 0.0) || !(diis_tolerance > 0.0))
    throw ConfigError("SCF tolerances must be positive");
  if (diis_depth < 2) throw ConfigError("DIIS history depth must be >= 2");
}

Matrix symmetric_orthogonalizer(const Matrix& overlap, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(overlap);
  if (es.info() != Eigen::Success) throw SolverError("overlap diagonalization failed");
  const Vector& w = es.eigenvalues();
  if (w.minCoeff() < -1e-8 * std::max(1.0, w.maxCoeff()))
    throw SolverError("overlap matrix is not positive definite");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) > cutoff) keep.push_back(i);
  if (keep.empty()) throw SolverError("overlap matrix has no eigenvalue above cutoff");
  Matrix x(overlap.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    x.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]) / std::sqrt(w(keep[k]));
  // Rotate back so that X = S^{-1/2} when nothing is dropped.
  if (keep.size() == static_cast<std::size_t>(overlap.rows()))
    x = x * es.eigenvectors().transpose();
  return x;
}

Matrix two_electron_fock(const chem::EriTensor& eri, const Matrix& density) {
  return chem::coulomb_matrix(eri, density) - 0.5 * chem::exchange_matrix(eri, density);
}

namespace {

struct Diagonalized {
  Matrix coefficients;
  Vector energies;
};

// Eigenvectors of F in the orthogonal basis, stably sorted by energy.
Diagonalized diagonalize(const Matrix& fock, const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.transpose() * fock * x);
  if (es.info() != Eigen::Success) throw SolverError("Fock diagonalization failed");
  const auto n = es.eigenvalues().size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return es.eigenvalues()(a) < es.eigenvalues()(b);
  });
  Diagonalized d;
  d.coefficients.resize(x.rows(), n);
  d.energies.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    d.coefficients.col(k) = x * es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    d.energies(k) = es.eigenvalues()(order[static_cast<std::size_t>(k)]);
  }
  return d;
}

Matrix occupied_density(const Matrix& c, int nocc) {
  const auto occ = c.leftCols(nocc);
  return 2.0 * occ * occ.transpose();
}

// Pulay DIIS extrapolation over stored (Fock, error) pairs.
class Diis {
 public:
  explicit Diis(int depth) : depth_(static_cast<std::size_t>(depth)) {}

  Matrix extrapolate(const Matrix& fock, const Matrix& error) {
    focks_.push_back(fock);
    errors_.push_back(error);
    if (focks_.size() > depth_) {
      focks_.pop_front();
      errors_.pop_front();
    }
    const auto m = static_cast<Eigen::Index>(focks_.size());
    if (m < 2) return fock;
    Matrix b = Matrix::Constant(m + 1, m + 1, -1.0);
    b(m, m) = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j <= i; ++j)
        b(i, j) = b(j, i) = errors_[static_cast<std::size_t>(i)]
                                .cwiseProduct(errors_[static_cast<std::size_t>(j)])
                                .sum();
    Vector rhs = Vector::Zero(m + 1);
    rhs(m) = -1.0;
    const Vector coef = b.completeOrthogonalDecomposition().solve(rhs);
    Matrix out = Matrix::Zero(fock.rows(), fock.cols());
    for (Eigen::Index i = 0; i < m; ++i) out += coef(i) * focks_[static_cast<std::size_t>(i)];
    return out;
  }

 private:
  std::size_t depth_;
  std::deque<Matrix> focks_;
  std::deque<Matrix> errors_;
};

}  // namespace

Matrix core_guess(const chem::IntegralSet& integrals, int n_electrons) {
  const Matrix x = symmetric_orthogonalizer(integrals.overlap);
  if (n_electrons < 0 || n_electrons / 2 > x.cols())
    throw ConfigError("more occupied orbitals than linearly independent AOs");
  const auto d = diagonalize(integrals.core_hamiltonian(), x);
  return occupied_density(d.coefficients, n_electrons / 2);
}

SCFResult run_rhf(const chem::IntegralSet& integrals, int n_electrons, const SCFConfig& config,
                  const pcm::SolventModel* solvent) {
  config.validate();
  const int n_ao = static_cast<int>(integrals.overlap.rows());
  if (n_electrons < 0 || n_electrons % 2 != 0)
    throw ConfigError("restricted closed-shell SCF needs an even electron count");
  if (n_electrons > 2 * n_ao) throw ConfigError("more electrons than the basis can hold");

  const Matrix& s = integrals.overlap;
  const Matrix h = integrals.core_hamiltonian();
  const Matrix x = symmetric_orthogonalizer(s);
  const int nocc = n_electrons / 2;
  if (nocc > x.cols()) throw ConfigError("more occupied orbitals than linearly independent AOs");

  SCFResult res;
  res.n_occupied = nocc;
  res.solvated = solvent != nullptr;
  Matrix density = core_guess(integrals, n_electrons);
  Diis diis(config.diis_depth);
  double previous = 0.0;
  Diagonalized orbitals;

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    const Matrix g = two_electron_fock(integrals.eri, density);
    Matrix fock = h + g;
    double energy = 0.5 * density.cwiseProduct(h + fock).sum() + integrals.nuclear_repulsion;
    if (solvent) {
      auto charges = solvent->respond(density);
      fock += solvent->fock(charges).v;
      energy += charges.polarization_energy;
      res.polarization_energy = charges.polarization_energy;
      res.surface_charges = std::move(charges);
    }
    const Matrix error = x.transpose() * (fock * density * s - s * density * fock) * x;
    const double err = error.cwiseAbs().maxCoeff();
    res.energy_history.push_back(energy);
    res.diis_history.push_back(err);
    res.energy = energy;
    res.diis_error = err;
    res.fock = fock;
    res.iterations = iter;

    // converged once the energy has settled and the last three commutator
    // residuals are all below tolerance
    const auto& hist = res.diis_history;
    const bool residual_settled =
        hist.size() >= 3 && std::all_of(hist.end() - 3, hist.end(),
                                        [&](double e) { return e < config.diis_tolerance; });
    if (iter > 1 && std::abs(energy - previous) < config.energy_tolerance && residual_settled) {
      res.converged = true;
      break;
    }
    previous = energy;

    Matrix next = diis.extrapolate(fock, error);
    if (config.level_shift != 0.0) {
      // shift the virtual space: F + mu (S - S P S / 2)
      next += config.level_shift * (s - 0.5 * s * density * s);
    }
    orbitals = diagonalize(next, x);
    density = occupied_density(orbitals.coefficients, nocc);
  }

  // Final orbitals are the eigenvectors of the last un-extrapolated Fock
  // matrix so that C^T F C is diagonal for the reported state.
  orbitals = diagonalize(res.fock, x);
  res.coefficients = orbitals.coefficients;
  res.orbital_energies = orbitals.energies;
  res.density = occupied_density(res.coefficients, nocc);
  return res;
}

}  // namespace solvaq::scf
