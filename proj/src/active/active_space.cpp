#include "solvaq/active/active_space.hpp"

#include "solvaq/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace solvaq::active {

Matrix MOSpace::columns(const std::vector<int>& idx) const {
  Matrix out(coefficients.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = coefficients.col(idx[k]);
  return out;
}

Matrix MOSpace::core_density() const {
  const Matrix c = core_coefficients();
  return 2.0 * c * c.transpose();
}

void MOSpace::validate(int n_electrons) const {
  std::vector<int> all;
  all.insert(all.end(), core.begin(), core.end());
  all.insert(all.end(), active.begin(), active.end());
  all.insert(all.end(), virtuals.begin(), virtuals.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i] != static_cast<int>(i))
      throw ConfigError("orbital partition is not disjoint and exhaustive");
  if (static_cast<Eigen::Index>(all.size()) != coefficients.cols())
    throw ConfigError("orbital partition does not cover every MO");
  if (n_active_electrons != n_electrons - 2 * static_cast<int>(core.size()))
    throw ConfigError("active electron count inconsistent with the core");
  if (n_active_electrons < 0 || n_active_electrons > 2 * n_active())
    throw ConfigError("active electrons do not fit in the active orbitals");
}

MOSpace manual_select(const scf::SCFResult& scf, const std::vector<int>& active_orbitals) {
  const int n_mo = static_cast<int>(scf.coefficients.cols());
  MOSpace mos;
  mos.coefficients = scf.coefficients;
  std::vector<char> is_active(static_cast<std::size_t>(n_mo), 0);
  for (int i : active_orbitals) {
    if (i < 0 || i >= n_mo) throw ConfigError("active orbital index out of range: " + std::to_string(i));
    if (is_active[static_cast<std::size_t>(i)]) throw ConfigError("duplicate active orbital " + std::to_string(i));
    is_active[static_cast<std::size_t>(i)] = 1;
  }
  for (int i = 0; i < n_mo; ++i) {
    if (is_active[static_cast<std::size_t>(i)]) mos.active.push_back(i);
    else if (i < scf.n_occupied) mos.core.push_back(i);
    else mos.virtuals.push_back(i);
  }
  mos.n_active_electrons = 2 * scf.n_occupied - 2 * static_cast<int>(mos.core.size());
  mos.validate(2 * scf.n_occupied);
  return mos;
}

namespace {

struct Rotated {
  Matrix coefficients;  // rotated block, columns sorted by descending eigenvalue
  Vector eigenvalues;
};

Rotated project_block(const Matrix& block, const Matrix& projector) {
  Rotated r;
  if (block.cols() == 0) {
    r.coefficients = block;
    r.eigenvalues.resize(0);
    return r;
  }
  const Matrix m = block.transpose() * projector * block;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw SolverError("AVAS projector diagonalization failed");
  const auto n = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  // descending eigenvalue; the eigen solver's index breaks ties
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });
  r.coefficients.resize(block.rows(), n);
  r.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    Eigen::VectorXd v = es.eigenvectors().col(src);
    // fix the arbitrary eigenvector sign: largest component positive
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    r.coefficients.col(k) = block * v;
    r.eigenvalues(k) = es.eigenvalues()(src);
  }
  return r;
}

// Number of leading eigenvalues selected: above threshold, extended to keep
// near-degenerate partners together.
int count_selected(const Vector& w, double threshold) {
  int n = 0;
  while (n < w.size() && w(n) > threshold) ++n;
  while (n > 0 && n < w.size() && std::abs(w(n - 1) - w(n)) < 1e-6) ++n;
  return n;
}

}  // namespace

MOSpace avas_select(const scf::SCFResult& scf, const chem::AOBasis& basis,
                    const std::vector<std::string>& targets, double threshold,
                    const Matrix& overlap) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("AVAS threshold must lie in (0, 1)");
  if (targets.empty()) throw ConfigError("AVAS needs at least one target AO label");
  const auto ao = basis.select(targets);
  if (ao.empty()) throw ConfigError("AVAS target labels match no AO of the basis");

  const auto n_ao = overlap.rows();
  const auto nt = static_cast<Eigen::Index>(ao.size());
  Matrix s_at(n_ao, nt), s_tt(nt, nt);
  for (Eigen::Index j = 0; j < nt; ++j) {
    s_at.col(j) = overlap.col(ao[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < nt; ++i)
      s_tt(i, j) = overlap(ao[static_cast<std::size_t>(i)], ao[static_cast<std::size_t>(j)]);
  }
  // projector onto span of the target AOs, expressed in the AO metric
  const Matrix projector = s_at * s_tt.ldlt().solve(s_at.transpose());

  const int nocc = scf.n_occupied;
  const auto n_mo = scf.coefficients.cols();
  const auto occ = project_block(scf.coefficients.leftCols(nocc), projector);
  const auto vir = project_block(scf.coefficients.rightCols(n_mo - nocc), projector);
  const int n_occ_act = count_selected(occ.eigenvalues, threshold);
  const int n_vir_act = count_selected(vir.eigenvalues, threshold);

  // column order: core, active occupied, active virtual, inactive virtual
  MOSpace mos;
  mos.coefficients.resize(scf.coefficients.rows(), n_mo);
  mos.projector_eigenvalues.resize(n_mo);
  int col = 0;
  auto put = [&](const Rotated& r, Eigen::Index k) {
    mos.coefficients.col(col) = r.coefficients.col(k);
    mos.projector_eigenvalues(col) = r.eigenvalues(k);
    return col++;
  };
  for (Eigen::Index k = n_occ_act; k < nocc; ++k) mos.core.push_back(put(occ, k));
  for (Eigen::Index k = 0; k < n_occ_act; ++k) mos.active.push_back(put(occ, k));
  for (Eigen::Index k = 0; k < n_vir_act; ++k) mos.active.push_back(put(vir, k));
  for (Eigen::Index k = n_vir_act; k < vir.eigenvalues.size(); ++k) mos.virtuals.push_back(put(vir, k));
  mos.n_active_electrons = 2 * n_occ_act;
  mos.validate(2 * nocc);
  return mos;
}

MOSpace select_active_space(const scf::SCFResult& scf, const chem::AOBasis& basis,
                            const Matrix& overlap, const ActiveSpaceSpec& spec) {
  if (spec.mode == ActiveSpaceSpec::Mode::manual && spec.active_orbitals.empty())
    throw ConfigError("manual active space needs a non-empty orbital list");
  MOSpace mos = spec.mode == ActiveSpaceSpec::Mode::avas
                    ? avas_select(scf, basis, spec.targets, spec.threshold, overlap)
                    : manual_select(scf, spec.active_orbitals);
  if (spec.n_active_orbitals >= 0 && spec.n_active_orbitals != mos.n_active())
    throw ConfigError("active space has " + std::to_string(mos.n_active()) +
                      " orbitals, expected " + std::to_string(spec.n_active_orbitals));
  if (spec.n_active_electrons >= 0 && spec.n_active_electrons != mos.n_active_electrons)
    throw ConfigError("active space has " + std::to_string(mos.n_active_electrons) +
                      " electrons, expected " + std::to_string(spec.n_active_electrons));
  return mos;
}

ActiveHamiltonian transform_integrals(const chem::IntegralSet& integrals, const MOSpace& mos,
                                      const pcm::SolventOperator* solvent) {
  const int na = mos.n_active();
  if (na > kMaxActiveOrbitals)
    throw CapacityError("active space of " + std::to_string(na) + " orbitals exceeds the cap of " +
                        std::to_string(kMaxActiveOrbitals));
  if (mos.n_active_electrons % 2 != 0)
    throw ConfigError("closed-shell active spaces need an even electron count");

  const Matrix h = integrals.core_hamiltonian();
  const Matrix p_core = mos.core_density();
  const Matrix g_core = scf::two_electron_fock(integrals.eri, p_core);
  const Matrix ca = mos.active_coefficients();

  ActiveHamiltonian out;
  out.n_orb = na;
  out.n_alpha = out.n_beta = mos.n_active_electrons / 2;
  out.h_eff = ca.transpose() * (h + g_core) * ca;
  out.e_frozen = integrals.nuclear_repulsion + p_core.cwiseProduct(h).sum() +
                 0.5 * p_core.cwiseProduct(g_core).sum();

  // (ij|rs) for every AO pair rs, then (ij|kl).
  const int n = integrals.eri.n();
  const auto n_pairs = static_cast<Eigen::Index>(integrals.eri.n_pairs());
  Matrix half(na * na, n_pairs);
  Matrix m(n, n);
  for (int r = 0, rs = 0; r < n; ++r)
    for (int s = 0; s <= r; ++s, ++rs) {
      for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q) m(p, q) = m(q, p) = integrals.eri(p, q, r, s);
      const Matrix t = ca.transpose() * m * ca;
      half.col(rs) = Eigen::Map<const Eigen::VectorXd>(t.data(), na * na);
    }
  out.eri = chem::EriTensor(na);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j <= i; ++j) {
      for (int r = 0, rs = 0; r < n; ++r)
        for (int s = 0; s <= r; ++s, ++rs) m(r, s) = m(s, r) = half(i + j * na, rs);
      const Matrix t = ca.transpose() * m * ca;
      for (int k = 0; k < na; ++k)
        for (int l = 0; l <= k; ++l)
          if (chem::pair_index(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) >=
              chem::pair_index(static_cast<std::size_t>(k), static_cast<std::size_t>(l)))
            out.eri.set(i, j, k, l, t(k, l));
    }
  if (solvent) return add_solvent(out, mos, *solvent);
  return out;
}

ActiveHamiltonian add_solvent(const ActiveHamiltonian& gas, const MOSpace& mos,
                              const pcm::SolventOperator& solvent) {
  ActiveHamiltonian out = gas;
  const Matrix ca = mos.active_coefficients();
  out.h_eff += ca.transpose() * solvent.v * ca;
  out.e_frozen += mos.core_density().cwiseProduct(solvent.v).sum() + solvent.nuclear_energy;
  return out;
}

Matrix total_density(const MOSpace& mos, const Matrix& active_rdm) {
  const Matrix ca = mos.active_coefficients();
  return mos.core_density() + ca * active_rdm * ca.transpose();
}

double determinant_energy(const ActiveHamiltonian& h) {
  double e = h.e_frozen;
  const int nocc = h.n_alpha;
  for (int i = 0; i < nocc; ++i) {
    e += 2.0 * h.h_eff(i, i);
    for (int j = 0; j < nocc; ++j) e += 2.0 * h.eri(i, i, j, j) - h.eri(i, j, j, i);
  }
  return e;
}

}  // namespace solvaq::active
