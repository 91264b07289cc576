#include "solvaq/sqd/hamiltonian.hpp"

#include "solvaq/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace solvaq::sqd {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Bits below(int p) { return (Bits{1} << p) - 1; }

// (-1)^(number of occupied orbitals strictly between a and b)
int parity_between(Bits s, int a, int b) {
  if (a > b) std::swap(a, b);
  const Bits mask = below(b) & ~below(a + 1);
  return std::popcount(s & mask) & 1 ? -1 : 1;
}

// sign picked up by a_p or a+_p acting on s
int parity_below(Bits s, int p) { return std::popcount(s & below(p)) & 1 ? -1 : 1; }

int lowest(Bits s) { return std::countr_zero(s); }

}  // namespace

ExcitationTable::ExcitationTable(const SubspaceBasis& basis) {
  const std::size_t m = basis.size();
  const int n = basis.n_orb();
  std::vector<std::vector<Excitation>> buckets(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Bits src = basis.string(j);
    for (int q = 0; q < n; ++q) {
      if (!(src >> q & 1)) continue;
      for (int p = 0; p < n; ++p) {
        if (p == q) {
          buckets[j].push_back({static_cast<std::uint32_t>(j), static_cast<std::uint8_t>(p),
                                static_cast<std::uint8_t>(q), 1});
          continue;
        }
        if (src >> p & 1) continue;
        const auto i = basis.find(src ^ (Bits{1} << q) ^ (Bits{1} << p));
        if (i < 0) continue;
        buckets[static_cast<std::size_t>(i)].push_back(
            {static_cast<std::uint32_t>(j), static_cast<std::uint8_t>(p),
             static_cast<std::uint8_t>(q), static_cast<std::int8_t>(parity_between(src, p, q))});
      }
    }
  }
  offsets_.assign(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) offsets_[i + 1] = offsets_[i] + buckets[i].size();
  entries_.reserve(offsets_[m]);
  for (auto& b : buckets) entries_.insert(entries_.end(), b.begin(), b.end());
}

ProjectedHamiltonian::ProjectedHamiltonian(const active::ActiveHamiltonian& h,
                                           const SubspaceBasis& basis, const ExcitationTable& table)
    : basis_(basis), table_(table), n_(h.n_orb), constant_(h.e_frozen) {
  if (basis.n_orb() != h.n_orb) throw DomainError("subspace and Hamiltonian differ in n_orb");
  if (basis.n_elec() != h.n_alpha || h.n_alpha != h.n_beta)
    throw DomainError("subspace electron count does not match the Hamiltonian");
  if (table.size() != basis.size()) throw DomainError("excitation table built for another basis");
  const int n = n_;
  eri_.resize(static_cast<std::size_t>(n) * n * n * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          eri_[static_cast<std::size_t>(((p * n + q) * n + r) * n + s)] = h.eri(p, q, r, s);
  const Matrix& t = h.h_eff;

  // same-spin Slater-Condon rules over U
  const std::size_t m = basis.size();
  std::vector<Eigen::Triplet<double>> triplets;
  Vector string_diag(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const Bits si = basis.string(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const Bits sj = basis.string(j);
      const Bits diff = si ^ sj;
      const int order = std::popcount(diff);
      double v = 0.0;
      if (order == 0) {
        for (Bits a = si; a; a &= a - 1) {
          const int k = lowest(a);
          v += t(k, k);
          for (Bits b = si; b; b &= b - 1) {
            const int l = lowest(b);
            v += 0.5 * (eri(k, k, l, l) - eri(k, l, l, k));
          }
        }
        string_diag(static_cast<Eigen::Index>(i)) = v;
      } else if (order == 2) {
        const int p = lowest(si & diff);
        const int q = lowest(sj & diff);
        v = t(p, q);
        for (Bits a = sj & ~(Bits{1} << q); a; a &= a - 1) {
          const int k = lowest(a);
          v += eri(p, q, k, k) - eri(p, k, k, q);
        }
        v *= parity_between(sj, p, q);
      } else if (order == 4) {
        const Bits holes = sj & diff;
        const Bits parts = si & diff;
        const int q1 = lowest(holes), q2 = lowest(holes & (holes - 1));
        const int p1 = lowest(parts), p2 = lowest(parts & (parts - 1));
        // a+_p1 a+_p2 a_q2 a_q1 |sj> = phase |si>
        Bits x = sj;
        int phase = parity_below(x, q1);
        x ^= Bits{1} << q1;
        phase *= parity_below(x, q2);
        x ^= Bits{1} << q2;
        phase *= parity_below(x, p2);
        x ^= Bits{1} << p2;
        phase *= parity_below(x, p1);
        v = phase * (eri(p1, q1, p2, q2) - eri(p1, q2, p2, q1));
      } else {
        continue;
      }
      if (v == 0.0) continue;
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
      if (i != j) triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
    }
  }
  same_spin_.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  same_spin_.setFromTriplets(triplets.begin(), triplets.end());

  diagonal_.resize(static_cast<Eigen::Index>(basis.dimension()));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      double v = string_diag(static_cast<Eigen::Index>(a)) + string_diag(static_cast<Eigen::Index>(b));
      for (Bits x = basis.string(a); x; x &= x - 1)
        for (Bits y = basis.string(b); y; y &= y - 1) {
          const int k = lowest(x), l = lowest(y);
          v += eri(k, k, l, l);
        }
      diagonal_(static_cast<Eigen::Index>(a * m + b)) = v;
    }
}

Vector ProjectedHamiltonian::apply(const Vector& c) const {
  const auto m = static_cast<Eigen::Index>(basis_.size());
  if (c.size() != m * m) throw DomainError("CI vector does not match the subspace dimension");
  Eigen::Map<const RowMatrix> cm(c.data(), m, m);
  RowMatrix sigma = same_spin_ * cm;
  sigma += cm * same_spin_;
  const int n2 = n_ * n_;
  for (Eigen::Index ia = 0; ia < m; ++ia) {
    for (const Excitation* ea = table_.begin(static_cast<std::size_t>(ia));
         ea != table_.end(static_cast<std::size_t>(ia)); ++ea) {
      const double* g = eri_.data() + static_cast<std::size_t>((ea->p * n_ + ea->q) * n2);
      const double* row = cm.data() + static_cast<Eigen::Index>(ea->source) * m;
      double* out = sigma.data() + ia * m;
      const double sa = ea->sign;
      for (Eigen::Index ib = 0; ib < m; ++ib) {
        double acc = 0.0;
        for (const Excitation* eb = table_.begin(static_cast<std::size_t>(ib));
             eb != table_.end(static_cast<std::size_t>(ib)); ++eb)
          acc += eb->sign * g[eb->p * n_ + eb->q] * row[eb->source];
        out[ib] += sa * acc;
      }
    }
  }
  return Eigen::Map<const Vector>(sigma.data(), m * m);
}

Matrix ProjectedHamiltonian::dense() const {
  const auto d = static_cast<Eigen::Index>(dimension());
  Matrix out(d, d);
  Vector e = Vector::Zero(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    e(k) = 1.0;
    out.col(k) = apply(e);
    e(k) = 0.0;
  }
  return out;
}

namespace {

void fix_phase(Vector& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
}

EigenPair dense_ground_state(const ProjectedHamiltonian& h) {
  Matrix a = h.dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success) throw SolverError("dense subspace diagonalization failed");
  EigenPair out;
  out.vector = es.eigenvectors().col(0);
  fix_phase(out.vector);
  out.energy = es.eigenvalues()(0) + h.constant();
  out.residual = (h.apply(out.vector) - es.eigenvalues()(0) * out.vector).norm();
  return out;
}

// Gram-Schmidt twice against the columns of v; returns the remaining norm.
double orthogonalize(Vector& t, const Matrix& v, Eigen::Index k) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index j = 0; j < k; ++j) t -= v.col(j).dot(t) * v.col(j);
  return t.norm();
}

}  // namespace

EigenPair davidson_ground_state(const ProjectedHamiltonian& h, const DavidsonOptions& options,
                                const std::optional<Vector>& guess) {
  const auto d = static_cast<Eigen::Index>(h.dimension());
  if (d == 0) throw DomainError("empty subspace");
  if (d == 1 || static_cast<std::size_t>(d) <= options.dense_below) return dense_ground_state(h);

  const Vector& diag = h.diagonal();
  const Eigen::Index max_sub = std::max(2, std::min<int>(options.max_subspace, static_cast<int>(d)));
  Matrix v(d, max_sub), av(d, max_sub);
  Eigen::Index k = 0;

  Vector t;
  if (guess && guess->size() == d && guess->norm() > 0) {
    t = *guess;
  } else {
    Eigen::Index i0 = 0;
    diag.minCoeff(&i0);
    t = Vector::Zero(d);
    t(i0) = 1.0;
  }

  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  Vector x, ax;
  double theta = 0.0, rnorm = 0.0;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    double norm = orthogonalize(t, v, k);
    if (norm < 1e-10) {
      if (k == 0) throw SolverError("Davidson start vector vanished");
      // correction lies in the current space; the Ritz vector is as good as it gets
      EigenPair out{theta + h.constant(), x / x.norm(), rnorm, iter};
      fix_phase(out.vector);
      return out;
    }
    v.col(k) = t / norm;
    av.col(k) = h.apply(v.col(k));
    ++k;

    const Matrix sub = v.leftCols(k).transpose() * av.leftCols(k);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sub + sub.transpose()));
    if (es.info() != Eigen::Success) throw SolverError("Davidson subspace diagonalization failed");
    theta = es.eigenvalues()(0);
    const Vector y = es.eigenvectors().col(0);
    x = v.leftCols(k) * y;
    ax = av.leftCols(k) * y;
    const Vector r = ax - theta * x;
    rnorm = r.norm();
    if (rnorm <= options.tolerance || k == d) {
      EigenPair out{theta + h.constant(), x / x.norm(), rnorm, iter};
      fix_phase(out.vector);
      return out;
    }
    if (rnorm < best) {
      best = rnorm;
      since_best = 0;
    } else if (++since_best >= options.stagnation_window) {
      std::ostringstream msg;
      msg << "Davidson stagnated: residual " << rnorm << " (best " << best << ") after " << iter
          << " expansions, d = " << d;
      throw SolverError(msg.str());
    }

    if (k == max_sub) {
      v.col(0) = x / x.norm();
      av.col(0) = ax / x.norm();
      k = 1;
    }
    t.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      double denom = theta - diag(i);
      if (std::abs(denom) < 1e-8) denom = denom < 0 ? -1e-8 : 1e-8;
      t(i) = r(i) / denom;
    }
    const double raw = t.norm();
    if (orthogonalize(t, v, k) < 1e-10 * raw) t = r;
  }
  std::ostringstream msg;
  msg << "Davidson did not converge in " << options.max_iterations << " iterations (residual "
      << rnorm << ")";
  throw SolverError(msg.str());
}

OneRDM one_rdm(const Vector& psi, const SubspaceBasis& basis, const ExcitationTable& table) {
  const int n = basis.n_orb();
  const auto m = static_cast<Eigen::Index>(basis.size());
  if (psi.size() != m * m) throw DomainError("CI vector does not match the subspace dimension");
  Eigen::Map<const RowMatrix> c(psi.data(), m, m);
  OneRDM out{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  for (Eigen::Index i = 0; i < m; ++i)
    for (const Excitation* e = table.begin(static_cast<std::size_t>(i));
         e != table.end(static_cast<std::size_t>(i)); ++e) {
      out.alpha(e->p, e->q) += e->sign * c.row(i).dot(c.row(e->source));
      out.beta(e->p, e->q) += e->sign * c.col(i).dot(c.col(e->source));
    }
  out.alpha = 0.5 * (out.alpha + out.alpha.transpose()).eval();
  out.beta = 0.5 * (out.beta + out.beta.transpose()).eval();
  return out;
}

}  // namespace solvaq::sqd
