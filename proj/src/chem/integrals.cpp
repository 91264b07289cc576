// McMurchie-Davidson integrals over contracted spherical Gaussians (L <= 2).

#include "solvaq/chem/integrals.hpp"

#include "solvaq/chem/boys.hpp"
#include "solvaq/error.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace solvaq::chem {

namespace {

constexpr double kPrimitiveCutoff = 1e-14;
constexpr int kMaxL1 = kMaxAngularMomentum + 2;     // kinetic needs j + 2
constexpr int kMaxHermite = 4 * kMaxAngularMomentum;  // total order in (ab|cd)
constexpr int kRDim = kMaxHermite + 1;

// E[i][j][t]: Hermite expansion of one Cartesian dimension of a primitive product.
using ETable = std::array<std::array<std::array<double, 2 * kMaxL1 + 1>, kMaxL1 + 1>, kMaxL1 + 1>;

void hermite_e(int imax, int jmax, double a, double b, double xab, ETable& e) {
  const double p = a + b;
  const double mu = a * b / p;
  for (auto& x : e)
    for (auto& y : x) y.fill(0.0);
  e[0][0][0] = std::exp(-mu * xab * xab);
  const double xpa = -b / p * xab;
  const double xpb = a / p * xab;
  const double inv2p = 0.5 / p;
  for (int i = 0; i <= imax; ++i) {
    for (int j = 0; j <= jmax; ++j) {
      if (i == 0 && j == 0) continue;
      for (int t = 0; t <= i + j; ++t) {
        double v;
        if (i > 0) {
          const auto& prev = e[i - 1][j];
          v = xpa * prev[t] + (t + 1 <= i - 1 + j ? (t + 1) * prev[t + 1] : 0.0);
          if (t > 0) v += inv2p * prev[t - 1];
        } else {
          const auto& prev = e[i][j - 1];
          v = xpb * prev[t] + (t + 1 <= i + j - 1 ? (t + 1) * prev[t + 1] : 0.0);
          if (t > 0) v += inv2p * prev[t - 1];
        }
        e[i][j][t] = v;
      }
    }
  }
}

// Hermite Coulomb integrals R^0_{tuv}(p, PC) for t+u+v <= lmax.
class RTable {
 public:
  void compute(int lmax, double p, const Vec3& pc) {
    lmax_ = lmax;
    std::array<double, kMaxHermite + 1> f{};
    boys(lmax, p * pc.squaredNorm(), f.data());
    double fac = 1.0;
    for (int n = 0; n <= lmax; ++n) {
      at(n, 0, 0, 0) = fac * f[static_cast<std::size_t>(n)];
      fac *= -2.0 * p;
    }
    for (int order = 1; order <= lmax; ++order) {
      for (int n = 0; n <= lmax - order; ++n) {
        for (int t = 0; t <= order; ++t) {
          for (int u = 0; u <= order - t; ++u) {
            const int v = order - t - u;
            double r;
            if (t > 0) {
              r = pc.x() * at(n + 1, t - 1, u, v);
              if (t > 1) r += (t - 1) * at(n + 1, t - 2, u, v);
            } else if (u > 0) {
              r = pc.y() * at(n + 1, t, u - 1, v);
              if (u > 1) r += (u - 1) * at(n + 1, t, u - 2, v);
            } else {
              r = pc.z() * at(n + 1, t, u, v - 1);
              if (v > 1) r += (v - 1) * at(n + 1, t, u, v - 2);
            }
            at(n, t, u, v) = r;
          }
        }
      }
    }
  }
  double operator()(int t, int u, int v) const { return data_[idx(0, t, u, v)]; }

 private:
  static std::size_t idx(int n, int t, int u, int v) {
    return ((static_cast<std::size_t>(n) * kRDim + t) * kRDim + u) * kRDim + v;
  }
  double& at(int n, int t, int u, int v) { return data_[idx(n, t, u, v)]; }
  int lmax_ = 0;
  std::array<double, kRDim * kRDim * kRDim * kRDim> data_{};
};

struct Hermite3 {
  int t, u, v;
};

// (t, u, v) triples with t + u + v <= l, t-major.
const std::vector<Hermite3>& hermite_triples(int l) {
  static const auto tables = [] {
    std::array<std::vector<Hermite3>, kMaxHermite + 1> out;
    for (int l = 0; l <= kMaxHermite; ++l)
      for (int t = 0; t <= l; ++t)
        for (int u = 0; u <= l - t; ++u)
          for (int v = 0; v <= l - t - u; ++v) out[static_cast<std::size_t>(l)].push_back({t, u, v});
    return out;
  }();
  return tables[static_cast<std::size_t>(l)];
}

// Hermite expansion of one contracted-primitive pair: for each Cartesian
// component pair, the coefficients E_t E_u E_v (times contraction
// coefficients) over hermite_triples(la + lb).
struct PrimitivePair {
  double p = 0.0;
  Vec3 center = Vec3::Zero();
  std::vector<double> coef;  // [cart_a * n_cart_b + cart_b][triple]
};

struct ShellPair {
  int la = 0, lb = 0;
  std::vector<PrimitivePair> prims;
};

ShellPair make_shell_pair(const Shell& sa, const Shell& sb) {
  ShellPair sp;
  sp.la = sa.l();
  sp.lb = sb.l();
  const auto ca = cartesian_components(sa.l());
  const auto cb = cartesian_components(sb.l());
  const auto& triples = hermite_triples(sa.l() + sb.l());
  const Vec3 ab = sa.center() - sb.center();
  ETable ex, ey, ez;
  for (std::size_t i = 0; i < sa.primitives().size(); ++i) {
    for (std::size_t j = 0; j < sb.primitives().size(); ++j) {
      const double a = sa.primitives()[i].exponent;
      const double b = sb.primitives()[j].exponent;
      const double p = a + b;
      const double cc = sa.scaled_coefficient(i) * sb.scaled_coefficient(j);
      if (std::abs(cc) * std::exp(-a * b / p * ab.squaredNorm()) < kPrimitiveCutoff) continue;
      hermite_e(sa.l(), sb.l(), a, b, ab.x(), ex);
      hermite_e(sa.l(), sb.l(), a, b, ab.y(), ey);
      hermite_e(sa.l(), sb.l(), a, b, ab.z(), ez);
      PrimitivePair pp;
      pp.p = p;
      pp.center = (a * sa.center() + b * sb.center()) / p;
      pp.coef.resize(ca.size() * cb.size() * triples.size());
      std::size_t k = 0;
      for (const auto& fa : ca)
        for (const auto& fb : cb)
          for (const auto& h : triples)
            pp.coef[k++] = cc * ex[fa[0]][fb[0]][h.t] * ey[fa[1]][fb[1]][h.u] *
                           ez[fa[2]][fb[2]][h.v];
      sp.prims.push_back(std::move(pp));
    }
  }
  return sp;
}

// out (na_s x nb_s) = Ta * cart (na_c x nb_c) * Tb^T, cart row-major.
void to_spherical_2(int la, int lb, const std::vector<double>& cart, Matrix& out, int row0,
                    int col0) {
  const auto& ta = spherical_transform(la);
  const auto& tb = spherical_transform(lb);
  const int nac = (la + 1) * (la + 2) / 2, nbc = (lb + 1) * (lb + 2) / 2;
  const int nas = 2 * la + 1, nbs = 2 * lb + 1;
  for (int i = 0; i < nas; ++i)
    for (int j = 0; j < nbs; ++j) {
      double s = 0.0;
      for (int x = 0; x < nac; ++x) {
        const double tix = ta[static_cast<std::size_t>(i * nac + x)];
        if (tix == 0.0) continue;
        for (int y = 0; y < nbc; ++y)
          s += tix * cart[static_cast<std::size_t>(x * nbc + y)] *
               tb[static_cast<std::size_t>(j * nbc + y)];
      }
      out(row0 + i, col0 + j) = s;
    }
}

// Applies the spherical transform to one axis of a row-major 4-index block.
std::vector<double> transform_axis(const std::vector<double>& in, std::array<int, 4>& dims,
                                   int axis, int l) {
  const auto& t = spherical_transform(l);
  const int nc = dims[static_cast<std::size_t>(axis)];
  const int ns = 2 * l + 1;
  int outer = 1, inner = 1;
  for (int k = 0; k < axis; ++k) outer *= dims[static_cast<std::size_t>(k)];
  for (int k = axis + 1; k < 4; ++k) inner *= dims[static_cast<std::size_t>(k)];
  std::vector<double> out(static_cast<std::size_t>(outer * ns * inner), 0.0);
  for (int o = 0; o < outer; ++o)
    for (int s = 0; s < ns; ++s)
      for (int c = 0; c < nc; ++c) {
        const double f = t[static_cast<std::size_t>(s * nc + c)];
        if (f == 0.0) continue;
        const double* src = &in[static_cast<std::size_t>((o * nc + c) * inner)];
        double* dst = &out[static_cast<std::size_t>((o * ns + s) * inner)];
        for (int i = 0; i < inner; ++i) dst[i] += f * src[i];
      }
  dims[static_cast<std::size_t>(axis)] = ns;
  return out;
}

// Cartesian block of sum_k w_k <a| 1/|r - C_k| |b>.
std::vector<double> attraction_block(const ShellPair& sp, int nac, int nbc,
                                     const std::vector<Vec3>& points,
                                     const std::vector<double>& weights) {
  const int l = sp.la + sp.lb;
  const auto& triples = hermite_triples(l);
  std::vector<double> cart(static_cast<std::size_t>(nac * nbc), 0.0);
  RTable r;
  for (const auto& pp : sp.prims) {
    const double pref = 2.0 * std::numbers::pi / pp.p;
    for (std::size_t k = 0; k < points.size(); ++k) {
      r.compute(l, pp.p, pp.center - points[k]);
      const double w = pref * weights[k];
      std::size_t idx = 0;
      for (int ab = 0; ab < nac * nbc; ++ab) {
        double s = 0.0;
        for (const auto& h : triples) s += pp.coef[idx++] * r(h.t, h.u, h.v);
        cart[static_cast<std::size_t>(ab)] += w * s;
      }
    }
  }
  return cart;
}

Matrix attraction_matrix(const AOBasis& basis, const std::vector<Vec3>& points,
                         const std::vector<double>& weights) {
  const auto& shells = basis.shells();
  Matrix m = Matrix::Zero(basis.n_ao(), basis.n_ao());
  for (std::size_t a = 0; a < shells.size(); ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      const auto sp = make_shell_pair(shells[a], shells[b]);
      const auto cart = attraction_block(sp, shells[a].n_cartesian(), shells[b].n_cartesian(),
                                         points, weights);
      to_spherical_2(sp.la, sp.lb, cart, m, basis.offset(a), basis.offset(b));
    }
  return m.triangularView<Eigen::Lower>().toDenseMatrix().selfadjointView<Eigen::Lower>();
}

}  // namespace

EriTensor::EriTensor(int n)
    : n_(n), n_pairs_(static_cast<std::size_t>(n) * (n + 1) / 2),
      data_(n_pairs_ * (n_pairs_ + 1) / 2, 0.0) {}

OneElectronIntegrals compute_one_electron(const AOBasis& basis, const Geometry& geometry) {
  const int n = basis.n_ao();
  OneElectronIntegrals out;
  out.overlap = Matrix::Zero(n, n);
  out.kinetic = Matrix::Zero(n, n);
  const auto& shells = basis.shells();
  ETable ex, ey, ez;
  for (std::size_t sa = 0; sa < shells.size(); ++sa) {
    for (std::size_t sb = 0; sb <= sa; ++sb) {
      const auto& A = shells[sa];
      const auto& B = shells[sb];
      const auto ca = cartesian_components(A.l());
      const auto cb = cartesian_components(B.l());
      std::vector<double> s(ca.size() * cb.size(), 0.0), t(ca.size() * cb.size(), 0.0);
      const Vec3 ab = A.center() - B.center();
      for (std::size_t i = 0; i < A.primitives().size(); ++i)
        for (std::size_t j = 0; j < B.primitives().size(); ++j) {
          const double a = A.primitives()[i].exponent;
          const double b = B.primitives()[j].exponent;
          const double p = a + b;
          const double cc = A.scaled_coefficient(i) * B.scaled_coefficient(j);
          hermite_e(A.l(), B.l() + 2, a, b, ab.x(), ex);
          hermite_e(A.l(), B.l() + 2, a, b, ab.y(), ey);
          hermite_e(A.l(), B.l() + 2, a, b, ab.z(), ez);
          const double root = std::sqrt(std::numbers::pi / p);
          auto s1 = [&](const ETable& e, int ia, int jb) {
            return jb < 0 ? 0.0 : e[ia][jb][0] * root;
          };
          auto t1 = [&](const ETable& e, int ia, int jb) {
            return -2.0 * b * b * s1(e, ia, jb + 2) + b * (2 * jb + 1) * s1(e, ia, jb) -
                   0.5 * jb * (jb - 1) * s1(e, ia, jb - 2);
          };
          std::size_t k = 0;
          for (const auto& fa : ca)
            for (const auto& fb : cb) {
              const double sx = s1(ex, fa[0], fb[0]), sy = s1(ey, fa[1], fb[1]),
                           sz = s1(ez, fa[2], fb[2]);
              s[k] += cc * sx * sy * sz;
              t[k] += cc * (t1(ex, fa[0], fb[0]) * sy * sz + sx * t1(ey, fa[1], fb[1]) * sz +
                            sx * sy * t1(ez, fa[2], fb[2]));
              ++k;
            }
        }
      to_spherical_2(A.l(), B.l(), s, out.overlap, basis.offset(sa), basis.offset(sb));
      to_spherical_2(A.l(), B.l(), t, out.kinetic, basis.offset(sa), basis.offset(sb));
    }
  }
  out.overlap = out.overlap.triangularView<Eigen::Lower>().toDenseMatrix()
                    .selfadjointView<Eigen::Lower>();
  out.kinetic = out.kinetic.triangularView<Eigen::Lower>().toDenseMatrix()
                    .selfadjointView<Eigen::Lower>();

  std::vector<Vec3> centers;
  std::vector<double> charges;
  for (const auto& atom : geometry.atoms()) {
    centers.push_back(atom.position);
    charges.push_back(-static_cast<double>(atom.charge));
  }
  out.nuclear = attraction_matrix(basis, centers, charges);
  out.nuclear_repulsion = geometry.nuclear_repulsion();
  return out;
}

Matrix esp_integrals(const AOBasis& basis, const Vec3& point) {
  return attraction_matrix(basis, {point}, {1.0});
}

EriTensor compute_eri(const AOBasis& basis, int max_ao) {
  const int n = basis.n_ao();
  if (n > max_ao)
    throw CapacityError("ERI tensor requested for " + std::to_string(n) + " AOs (cap " +
                        std::to_string(max_ao) + ")");
  EriTensor eri(n);
  const auto& shells = basis.shells();
  const std::size_t ns = shells.size();

  std::vector<ShellPair> pairs;
  std::vector<std::pair<std::size_t, std::size_t>> pair_shells;
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      pairs.push_back(make_shell_pair(shells[a], shells[b]));
      pair_shells.emplace_back(a, b);
    }

  RTable r;
  std::vector<double> w;
  for (std::size_t ab = 0; ab < pairs.size(); ++ab) {
    const auto& P = pairs[ab];
    const auto [sa, sb] = pair_shells[ab];
    const int nac = shells[sa].n_cartesian(), nbc = shells[sb].n_cartesian();
    const auto& tri_ab = hermite_triples(P.la + P.lb);
    for (std::size_t cd = 0; cd <= ab; ++cd) {
      const auto& Q = pairs[cd];
      const auto [sc, sd] = pair_shells[cd];
      const int ncc = shells[sc].n_cartesian(), ndc = shells[sd].n_cartesian();
      const auto& tri_cd = hermite_triples(Q.la + Q.lb);
      const int ltot = P.la + P.lb + Q.la + Q.lb;
      const int nab = nac * nbc, ncd = ncc * ndc;
      std::vector<double> cart(static_cast<std::size_t>(nab * ncd), 0.0);
      w.assign(static_cast<std::size_t>(ncd) * tri_ab.size(), 0.0);

      for (const auto& pp : P.prims) {
        for (const auto& qq : Q.prims) {
          const double alpha = pp.p * qq.p / (pp.p + qq.p);
          const double pref = 2.0 * std::pow(std::numbers::pi, 2.5) /
                              (pp.p * qq.p * std::sqrt(pp.p + qq.p));
          r.compute(ltot, alpha, pp.center - qq.center);
          // W[cd][tuv] = sum_{tau nu phi} (-1)^{tau+nu+phi} E^cd R_{t+tau, u+nu, v+phi}
          std::size_t widx = 0, qidx = 0;
          for (int c = 0; c < ncd; ++c) {
            const double* ecd = &qq.coef[qidx];
            qidx += tri_cd.size();
            for (const auto& h : tri_ab) {
              double s = 0.0;
              for (std::size_t k = 0; k < tri_cd.size(); ++k) {
                const auto& g = tri_cd[k];
                const double term = ecd[k] * r(h.t + g.t, h.u + g.u, h.v + g.v);
                s += ((g.t + g.u + g.v) & 1) ? -term : term;
              }
              w[widx++] = s;
            }
          }
          std::size_t pidx = 0;
          for (int a = 0; a < nab; ++a) {
            const double* eab = &pp.coef[pidx];
            pidx += tri_ab.size();
            for (int c = 0; c < ncd; ++c) {
              const double* wc = &w[static_cast<std::size_t>(c) * tri_ab.size()];
              double s = 0.0;
              for (std::size_t k = 0; k < tri_ab.size(); ++k) s += eab[k] * wc[k];
              cart[static_cast<std::size_t>(a * ncd + c)] += pref * s;
            }
          }
        }
      }

      std::array<int, 4> dims = {nac, nbc, ncc, ndc};
      auto sph = transform_axis(cart, dims, 0, shells[sa].l());
      sph = transform_axis(sph, dims, 1, shells[sb].l());
      sph = transform_axis(sph, dims, 2, shells[sc].l());
      sph = transform_axis(sph, dims, 3, shells[sd].l());
      const int oa = basis.offset(sa), ob = basis.offset(sb), oc = basis.offset(sc),
                od = basis.offset(sd);
      std::size_t k = 0;
      for (int i = 0; i < dims[0]; ++i)
        for (int j = 0; j < dims[1]; ++j)
          for (int kk = 0; kk < dims[2]; ++kk)
            for (int l = 0; l < dims[3]; ++l) eri.set(oa + i, ob + j, oc + kk, od + l, sph[k++]);
    }
  }
  return eri;
}

IntegralSet compute_integrals(const AOBasis& basis, const Geometry& geometry, int max_ao) {
  auto one = compute_one_electron(basis, geometry);
  IntegralSet set;
  set.overlap = std::move(one.overlap);
  set.kinetic = std::move(one.kinetic);
  set.nuclear = std::move(one.nuclear);
  set.nuclear_repulsion = one.nuclear_repulsion;
  set.eri = compute_eri(basis, max_ao);
  return set;
}

Matrix coulomb_matrix(const EriTensor& eri, const Matrix& density) {
  const int n = eri.n();
  Matrix j = Matrix::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      double s = 0.0;
      for (int r = 0; r < n; ++r)
        for (int t = 0; t < n; ++t) s += eri(p, q, r, t) * density(r, t);
      j(p, q) = j(q, p) = s;
    }
  return j;
}

Matrix exchange_matrix(const EriTensor& eri, const Matrix& density) {
  const int n = eri.n();
  Matrix k = Matrix::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      double s = 0.0;
      for (int r = 0; r < n; ++r)
        for (int t = 0; t < n; ++t) s += eri(p, r, q, t) * density(r, t);
      k(p, q) = k(q, p) = s;
    }
  return k;
}

}  // namespace solvaq::chem
