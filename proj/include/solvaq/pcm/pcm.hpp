#pragma once

#include "solvaq/chem/basis.hpp"
#include "solvaq/chem/geometry.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace solvaq::pcm {

using chem::Vec3;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kWaterPermittivity = 78.3553;

/// Dielectric of the continuum. epsilon == 1 is accepted and means vacuum
/// (every induced charge is zero).
struct DielectricParams {
  double epsilon = kWaterPermittivity;

  /// f = (eps - 1) / (eps + 1)
  double f() const { return (epsilon - 1.0) / (epsilon + 1.0); }
  bool is_vacuum() const { return epsilon == 1.0; }
  void validate() const;
};

struct CavityConfig {
  std::map<std::string, double> radii;  // element -> radius in bohr before scaling
  double scale = 1.2;
  int points_per_sphere = 302;

  /// Bondi van der Waals radii for H, He, C, N, O, F, S, Cl (converted to bohr).
  static CavityConfig bondi();
  void validate() const;
};

struct Tessera {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::Zero();
  double area = 0.0;
  int sphere = 0;
};

struct CavitySurface {
  std::vector<Tessera> tesserae;
  double total_area = 0.0;

  std::size_t size() const noexcept { return tesserae.size(); }
  /// CSV rows x,y,z,nx,ny,nz,area,sphere with a header line.
  void write_csv(std::ostream& out) const;
};

/// One sphere per atom (radius = radius(element) * scale) discretized with
/// the Lebedev grid; points strictly inside another sphere are removed and
/// every survivor carries area 4 pi R^2 / n_points.
CavitySurface build_cavity(const chem::Geometry& geometry, const CavityConfig& config);

struct PCMOperators {
  Matrix S;      // single layer, acting on tessera charges
  Matrix D;      // double layer
  Vector areas;  // diagonal of A
};

/// S_ij = 1/|s_i - s_j|, S_ii = 1.0694 sqrt(4 pi / a_i);
/// D_ij = n_j.(s_i - s_j)/|s_i - s_j|^3, D_ii from sum_j D_ij a_j = -2 pi.
PCMOperators assemble_operators(const CavitySurface& surface);

struct SurfaceChargeSolution {
  Vector charges;           // q_i
  Vector response_charges;  // symmetrized charges used for the Fock operator
  Vector potentials;        // phi_i that generated the charges
  double polarization_energy = 0.0;  // 1/2 q.phi

  Vector densities(const Vector& areas) const { return charges.cwiseQuotient(areas); }
};

/// Factorized IEF master equation [(2pi/f) I - D A] S q = -(2pi I - D A) phi.
class SurfaceChargeSolver {
 public:
  SurfaceChargeSolver(const PCMOperators& ops, const DielectricParams& dielectric);

  SurfaceChargeSolution solve(const Vector& potentials) const;
  std::size_t size() const noexcept { return n_; }
  double reciprocal_condition() const noexcept { return rcond_; }

 private:
  std::size_t n_;
  bool vacuum_;
  Eigen::PartialPivLU<Matrix> lu_;
  Matrix rhs_operator_;
  double rcond_ = 1.0;
};

SurfaceChargeSolution solve_surface_charge(const PCMOperators& ops,
                                           const DielectricParams& dielectric,
                                           const Vector& potentials);

/// phi_i = sum_A Z_A / |s_i - R_A| - sum_{mu nu} P_{mu nu} <mu|1/|r - s_i||nu>
Vector molecular_potential(const Matrix& density, const chem::Geometry& geometry,
                           const chem::AOBasis& basis, const CavitySurface& surface);

struct SolventOperator {
  Matrix v;                     // V_int in the AO basis
  double nuclear_energy = 0.0;  // interaction of the nuclei with the charges
};

/// V_mu nu = -sum_i q_i <mu|1/|r - s_i||nu>, nuclear term sum_i q_i sum_A Z_A/|s_i - R_A|,
/// evaluated with the solution's response charges.
SolventOperator fock_contribution(const SurfaceChargeSolution& solution,
                                  const CavitySurface& surface, const chem::AOBasis& basis,
                                  const chem::Geometry& geometry);

/// Everything needed to couple a solute density to the continuum repeatedly:
/// cavity, factorized master equation and tabulated ESP integrals.
class SolventModel {
 public:
  SolventModel(const chem::Geometry& geometry, const chem::AOBasis& basis,
               const DielectricParams& dielectric, const CavityConfig& cavity);

  const CavitySurface& surface() const noexcept { return surface_; }
  const PCMOperators& operators() const noexcept { return ops_; }
  const DielectricParams& dielectric() const noexcept { return dielectric_; }
  const Vector& nuclear_potential() const noexcept { return nuclear_potential_; }

  Vector potential(const Matrix& density) const;
  SurfaceChargeSolution respond(const Matrix& density) const;
  SolventOperator fock(const SurfaceChargeSolution& solution) const;

 private:
  DielectricParams dielectric_;
  CavitySurface surface_;
  PCMOperators ops_;
  SurfaceChargeSolver solver_;
  std::vector<Matrix> esp_;  // one AO matrix per tessera
  Vector nuclear_potential_;
};

}  // namespace solvaq::pcm
