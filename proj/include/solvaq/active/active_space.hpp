#pragma once

#include "solvaq/chem/integrals.hpp"
#include "solvaq/pcm/pcm.hpp"
#include "solvaq/scf/rhf.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace solvaq::active {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMaxActiveOrbitals = 24;
inline constexpr double kDefaultAvasThreshold = 0.2;

struct ActiveSpaceSpec {
  enum class Mode { manual, avas };
  Mode mode = Mode::manual;
  std::vector<int> active_orbitals;   // manual: MO indices
  std::vector<std::string> targets;   // avas: AO shell labels, e.g. "O 2p"
  double threshold = kDefaultAvasThreshold;
  // Optional expectations checked against the selection; -1 means unchecked.
  int n_active_electrons = -1;
  int n_active_orbitals = -1;
};

/// MO coefficients with a core / active / virtual partition of the columns.
struct MOSpace {
  Matrix coefficients;  // n_ao x n_mo
  std::vector<int> core;
  std::vector<int> active;
  std::vector<int> virtuals;
  int n_active_electrons = 0;
  Vector projector_eigenvalues;  // AVAS only: per MO column, empty otherwise

  Matrix columns(const std::vector<int>& idx) const;
  Matrix core_coefficients() const { return columns(core); }
  Matrix active_coefficients() const { return columns(active); }
  Matrix core_density() const;  // 2 C_core C_core^T
  int n_active() const { return static_cast<int>(active.size()); }
  void validate(int n_electrons) const;
};

/// Active-space Hamiltonian. h_eff carries the frozen-core mean field (and
/// the active block of any frozen solvent operator); e_frozen carries nuclear
/// repulsion, the core energy and the matching solvent constants.
struct ActiveHamiltonian {
  int n_orb = 0;
  int n_alpha = 0;
  int n_beta = 0;
  Matrix h_eff;
  chem::EriTensor eri;
  double e_frozen = 0.0;
};

/// Core selection by MO index: everything occupied and not listed is core.
MOSpace manual_select(const scf::SCFResult& scf, const std::vector<int>& active_orbitals);

/// Atomic valence active space with the computational basis as reference.
/// Occupied and virtual MOs are rotated separately onto eigenvectors of their
/// projection onto the target AOs; eigenvalues above threshold go active.
MOSpace avas_select(const scf::SCFResult& scf, const chem::AOBasis& basis,
                    const std::vector<std::string>& targets, double threshold,
                    const Matrix& overlap);

MOSpace select_active_space(const scf::SCFResult& scf, const chem::AOBasis& basis,
                            const Matrix& overlap, const ActiveSpaceSpec& spec);

/// Frozen-core transform to the active space; O(N^5) quarter transforms.
ActiveHamiltonian transform_integrals(const chem::IntegralSet& integrals, const MOSpace& mos,
                                      const pcm::SolventOperator* solvent = nullptr);

/// Adds a solvent operator evaluated for a fixed density: the active block
/// enters h_eff, the core trace and nuclear term enter e_frozen.
ActiveHamiltonian add_solvent(const ActiveHamiltonian& gas, const MOSpace& mos,
                              const pcm::SolventOperator& solvent);

/// AO density of the core plus an active-space spin-summed 1-RDM.
Matrix total_density(const MOSpace& mos, const Matrix& active_rdm);

/// Energy of a closed-shell determinant occupying the first n_alpha active orbitals.
double determinant_energy(const ActiveHamiltonian& h);

void fcidump_write(const ActiveHamiltonian& h, std::ostream& out);
void fcidump_write(const ActiveHamiltonian& h, const std::string& path);
ActiveHamiltonian fcidump_read(std::istream& in);
ActiveHamiltonian fcidump_read(const std::string& path);

}  // namespace solvaq::active
