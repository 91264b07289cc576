#pragma once

#include "solvaq/chem/geometry.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace solvaq::chem {

inline constexpr int kMaxAngularMomentum = 2;

struct Primitive {
  double exponent = 0.0;
  double coefficient = 0.0;
};

/// Contraction template as read from a basis file (not yet placed on an atom).
struct ShellTemplate {
  int l = 0;
  std::vector<Primitive> primitives;
};

/// Per-element shell lists, in file order.
using BasisLibrary = std::map<std::string, std::vector<ShellTemplate>>;

/// Parses the plain-text shell list format: an element symbol line, then
/// blocks of `L n_prim` followed by n_prim `exponent coefficient` rows,
/// closed by `****`. L may be an integer or one of S/P/D. `#` starts a comment.
BasisLibrary parse_basis_library(std::string_view text);
BasisLibrary read_basis_library(const std::string& path);

/// A contracted shell placed on an atom. Coefficients are renormalized at
/// construction so that every spherical component has unit self-overlap; they
/// multiply primitives normalized for the x^L Cartesian component.
class Shell {
 public:
  Shell(int atom, const Vec3& center, int l, std::vector<Primitive> primitives);

  int atom() const noexcept { return atom_; }
  const Vec3& center() const noexcept { return center_; }
  int l() const noexcept { return l_; }
  int n_spherical() const noexcept { return 2 * l_ + 1; }
  int n_cartesian() const noexcept { return (l_ + 1) * (l_ + 2) / 2; }
  const std::vector<Primitive>& primitives() const noexcept { return primitives_; }
  /// Coefficient times primitive normalization, ready for integral contraction.
  double scaled_coefficient(std::size_t k) const { return scaled_[k]; }

  Shell translated(const Vec3& shift) const;

 private:
  int atom_;
  Vec3 center_;
  int l_;
  std::vector<Primitive> primitives_;
  std::vector<double> scaled_;
};

/// Identity of one spherical atomic orbital.
struct AOLabel {
  int atom = 0;
  int shell = 0;
  int l = 0;
  int m = 0;               // component index 0..2l within the shell
  int principal = 0;       // l + 1 + (number of earlier shells of this l on the atom)
  std::string element;
  /// e.g. "O 2p"
  std::string shell_label() const;
};

class AOBasis {
 public:
  AOBasis() = default;
  explicit AOBasis(std::vector<Shell> shells, std::vector<std::string> elements);

  const std::vector<Shell>& shells() const noexcept { return shells_; }
  int n_ao() const noexcept { return n_ao_; }
  /// Index of the first spherical AO of shell s.
  int offset(std::size_t s) const { return offsets_[s]; }
  const std::vector<AOLabel>& labels() const noexcept { return labels_; }

  /// AO indices whose shell label (e.g. "O 2p", "H 1s") matches any of the
  /// targets. Matching is case-insensitive on the element.
  std::vector<int> select(const std::vector<std::string>& targets) const;

  AOBasis translated(const Vec3& shift) const;

 private:
  std::vector<Shell> shells_;
  std::vector<std::string> elements_;
  std::vector<int> offsets_;
  std::vector<AOLabel> labels_;
  int n_ao_ = 0;
};

/// Places library shells on every atom of the geometry.
AOBasis build_basis(const Geometry& geometry, const BasisLibrary& library);

/// Cartesian component exponents (lx, ly, lz) of shell angular momentum l,
/// ordered x..., e.g. l=2: xx xy xz yy yz zz.
std::vector<std::array<int, 3>> cartesian_components(int l);

/// Row-major (2l+1) x n_cart matrix taking uniformly normalized Cartesian
/// functions to real spherical components. p: x y z; d: xy yz z2 xz x2-y2.
const std::vector<double>& spherical_transform(int l);

}  // namespace solvaq::chem
