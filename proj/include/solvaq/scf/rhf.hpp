#pragma once

#include "solvaq/chem/integrals.hpp"
#include "solvaq/pcm/pcm.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace solvaq::scf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SCFConfig {
  int max_iterations = 200;
  double energy_tolerance = 1e-9;  // hartree
  double diis_tolerance = 1e-7;    // max |FDS - SDF| in the orthogonal basis
  int diis_depth = 8;
  double level_shift = 0.0;  // hartree, added to the virtual block

  void validate() const;
};

struct SCFResult {
  Matrix coefficients;       // n_ao x n_mo, columns ordered by orbital energy
  Vector orbital_energies;
  Matrix density;            // total (alpha + beta) AO density
  Matrix fock;               // final Fock matrix, solvent included when solvated
  double energy = 0.0;       // hartree; free energy when solvated
  int n_occupied = 0;
  bool solvated = false;
  bool converged = false;
  int iterations = 0;
  double diis_error = 0.0;
  std::vector<double> energy_history;
  std::vector<double> diis_history;
  double polarization_energy = 0.0;  // 1/2 q.phi, zero in gas phase
  std::optional<pcm::SurfaceChargeSolution> surface_charges;
};

/// S^{-1/2} restricted to eigenvalues above the cutoff (n_ao x n_mo).
Matrix symmetric_orthogonalizer(const Matrix& overlap, double cutoff = 1e-10);

/// Density built by doubly occupying the lowest core-Hamiltonian eigenvectors.
Matrix core_guess(const chem::IntegralSet& integrals, int n_electrons);

/// Restricted closed-shell Hartree-Fock. With a solvent model the surface
/// charges are re-solved from the current density every iteration and the
/// reported energy is E_gas(P) + 1/2 q.phi. Non-convergence is reported
/// through SCFResult::converged, never thrown.
SCFResult run_rhf(const chem::IntegralSet& integrals, int n_electrons, const SCFConfig& config = {},
                  const pcm::SolventModel* solvent = nullptr);

/// Electronic two-electron part G(P) = J(P) - K(P)/2.
Matrix two_electron_fock(const chem::EriTensor& eri, const Matrix& density);

}  // namespace solvaq::scf
