#include "solvaq/pcm/pcm.hpp"

#include "solvaq/chem/integrals.hpp"
#include "solvaq/error.hpp"
#include "solvaq/pcm/lebedev.hpp"
#include "solvaq/units.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace solvaq::pcm {

namespace {

constexpr double kSelfPotentialFactor = 1.0694;
constexpr double kCoincidentTolerance = 1e-10;
constexpr double kSingularRcond = 1e-14;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

void DielectricParams::validate() const {
  if (!(epsilon >= 1.0) || !std::isfinite(epsilon))
    throw ConfigError("dielectric constant must be finite and >= 1");
}

CavityConfig CavityConfig::bondi() {
  CavityConfig c;
  const std::map<std::string, double> angstrom = {{"H", 1.20},  {"He", 1.40}, {"C", 1.70},
                                                  {"N", 1.55},  {"O", 1.52},  {"F", 1.47},
                                                  {"S", 1.80},  {"Cl", 1.75}};
  for (const auto& [el, r] : angstrom) c.radii[el] = r * units::kBohrPerAngstrom;
  return c;
}

void CavityConfig::validate() const {
  if (!(scale > 0.0)) throw ConfigError("cavity radius scale must be positive");
  if (!is_supported_grid(points_per_sphere))
    throw ConfigError("points per sphere must be one of 110, 194, 302, 590");
  for (const auto& [el, r] : radii)
    if (!(r > 0.0)) throw ConfigError("cavity radius for " + el + " must be positive");
}

void CavitySurface::write_csv(std::ostream& out) const {
  out << "x,y,z,nx,ny,nz,area,sphere\n";
  out.precision(17);
  for (const auto& t : tesserae)
    out << t.position.x() << ',' << t.position.y() << ',' << t.position.z() << ','
        << t.normal.x() << ',' << t.normal.y() << ',' << t.normal.z() << ',' << t.area << ','
        << t.sphere << '\n';
}

CavitySurface build_cavity(const chem::Geometry& geometry, const CavityConfig& config) {
  config.validate();
  if (geometry.empty()) throw ConfigError("cannot build a cavity for an empty geometry");
  std::vector<double> radii;
  for (const auto& atom : geometry.atoms()) {
    const auto it = config.radii.find(atom.symbol);
    if (it == config.radii.end()) throw ConfigError("no cavity radius for element " + atom.symbol);
    radii.push_back(it->second * config.scale);
  }

  const auto& grid = lebedev_grid(config.points_per_sphere);
  CavitySurface surface;
  for (std::size_t a = 0; a < geometry.size(); ++a) {
    const double r = radii[a];
    const double area = 4.0 * std::numbers::pi * r * r / static_cast<double>(grid.size());
    for (const auto& pt : grid) {
      const Vec3 pos = geometry[a].position + r * pt.direction;
      bool buried = false;
      for (std::size_t b = 0; b < geometry.size() && !buried; ++b)
        if (b != a && (pos - geometry[b].position).norm() < radii[b]) buried = true;
      if (buried) continue;
      surface.tesserae.push_back({pos, pt.direction, area, static_cast<int>(a)});
      surface.total_area += area;
    }
  }
  return surface;
}

PCMOperators assemble_operators(const CavitySurface& surface) {
  const auto n = static_cast<Eigen::Index>(surface.size());
  if (n == 0) throw ConfigError("cavity surface has no tesserae");
  PCMOperators ops;
  ops.S.resize(n, n);
  ops.D.resize(n, n);
  ops.areas.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) ops.areas(i) = surface.tesserae[static_cast<std::size_t>(i)].area;

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ti = surface.tesserae[static_cast<std::size_t>(i)];
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& tj = surface.tesserae[static_cast<std::size_t>(j)];
      const Vec3 d = ti.position - tj.position;
      const double r = d.norm();
      if (r < kCoincidentTolerance)
        throw SolverError("degenerate surface: tesserae " + std::to_string(i) + " and " +
                          std::to_string(j) + " coincide");
      ops.S(i, j) = 1.0 / r;
      ops.D(i, j) = tj.normal.dot(d) / (r * r * r);
      row += ops.D(i, j) * tj.area;
    }
    ops.S(i, i) = kSelfPotentialFactor * std::sqrt(4.0 * std::numbers::pi / ti.area);
    ops.D(i, i) = -(kTwoPi + row) / ti.area;
  }
  return ops;
}

SurfaceChargeSolver::SurfaceChargeSolver(const PCMOperators& ops,
                                         const DielectricParams& dielectric)
    : n_(static_cast<std::size_t>(ops.S.rows())), vacuum_(dielectric.is_vacuum()) {
  dielectric.validate();
  if (vacuum_) return;
  const auto n = ops.S.rows();
  const Matrix da = ops.D * ops.areas.asDiagonal();
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix k = (kTwoPi / dielectric.f() * identity - da) * ops.S;
  rhs_operator_ = -(kTwoPi * identity - da);
  lu_.compute(k);
  rcond_ = lu_.rcond();
  if (!(rcond_ > kSingularRcond))
    throw SolverError("singular IEF system (reciprocal condition estimate " +
                      std::to_string(rcond_) + ")");
}

SurfaceChargeSolution SurfaceChargeSolver::solve(const Vector& potentials) const {
  if (static_cast<std::size_t>(potentials.size()) != n_)
    throw DomainError("potential vector does not match the number of tesserae");
  SurfaceChargeSolution sol;
  sol.potentials = potentials;
  if (vacuum_) {
    sol.charges = Vector::Zero(potentials.size());
    sol.response_charges = sol.charges;
    return sol;
  }
  sol.charges = lu_.solve(rhs_operator_ * potentials);
  // q_sym = (K^-1 R phi + R^T K^-T phi) / 2 is the derivative of 1/2 phi.q
  // with respect to phi; it gives the variational Fock operator.
  const Vector adjoint = lu_.transpose().solve(potentials);
  sol.response_charges = 0.5 * (sol.charges + rhs_operator_.transpose() * adjoint);
  sol.polarization_energy = 0.5 * sol.charges.dot(potentials);
  return sol;
}

SurfaceChargeSolution solve_surface_charge(const PCMOperators& ops,
                                           const DielectricParams& dielectric,
                                           const Vector& potentials) {
  return SurfaceChargeSolver(ops, dielectric).solve(potentials);
}

namespace {

Vector nuclear_potential_at(const chem::Geometry& geometry, const CavitySurface& surface) {
  Vector phi(static_cast<Eigen::Index>(surface.size()));
  for (std::size_t i = 0; i < surface.size(); ++i) {
    double v = 0.0;
    for (const auto& atom : geometry.atoms())
      v += atom.charge / (surface.tesserae[i].position - atom.position).norm();
    phi(static_cast<Eigen::Index>(i)) = v;
  }
  return phi;
}

}  // namespace

Vector molecular_potential(const Matrix& density, const chem::Geometry& geometry,
                           const chem::AOBasis& basis, const CavitySurface& surface) {
  Vector phi = nuclear_potential_at(geometry, surface);
  for (std::size_t i = 0; i < surface.size(); ++i)
    phi(static_cast<Eigen::Index>(i)) -=
        density.cwiseProduct(chem::esp_integrals(basis, surface.tesserae[i].position)).sum();
  return phi;
}

SolventOperator fock_contribution(const SurfaceChargeSolution& solution,
                                  const CavitySurface& surface, const chem::AOBasis& basis,
                                  const chem::Geometry& geometry) {
  SolventOperator op;
  op.v = Matrix::Zero(basis.n_ao(), basis.n_ao());
  const Vector& q = solution.response_charges;
  for (std::size_t i = 0; i < surface.size(); ++i) {
    const double qi = q(static_cast<Eigen::Index>(i));
    if (qi == 0.0) continue;
    op.v -= qi * chem::esp_integrals(basis, surface.tesserae[i].position);
  }
  op.nuclear_energy = q.dot(nuclear_potential_at(geometry, surface));
  return op;
}

SolventModel::SolventModel(const chem::Geometry& geometry, const chem::AOBasis& basis,
                           const DielectricParams& dielectric, const CavityConfig& cavity)
    : dielectric_(dielectric),
      surface_(build_cavity(geometry, cavity)),
      ops_(assemble_operators(surface_)),
      solver_(ops_, dielectric_),
      nuclear_potential_(nuclear_potential_at(geometry, surface_)) {
  esp_.reserve(surface_.size());
  for (const auto& t : surface_.tesserae) esp_.push_back(chem::esp_integrals(basis, t.position));
}

Vector SolventModel::potential(const Matrix& density) const {
  Vector phi = nuclear_potential_;
  for (std::size_t i = 0; i < esp_.size(); ++i)
    phi(static_cast<Eigen::Index>(i)) -= density.cwiseProduct(esp_[i]).sum();
  return phi;
}

SurfaceChargeSolution SolventModel::respond(const Matrix& density) const {
  return solver_.solve(potential(density));
}

SolventOperator SolventModel::fock(const SurfaceChargeSolution& solution) const {
  SolventOperator op;
  const auto n = esp_.empty() ? 0 : esp_.front().rows();
  op.v = Matrix::Zero(n, n);
  const Vector& q = solution.response_charges;
  for (std::size_t i = 0; i < esp_.size(); ++i) {
    const double qi = q(static_cast<Eigen::Index>(i));
    if (qi != 0.0) op.v -= qi * esp_[i];
  }
  op.nuclear_energy = q.dot(nuclear_potential_);
  return op;
}

}  // namespace solvaq::pcm
