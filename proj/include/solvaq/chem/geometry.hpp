#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace solvaq::chem {

using Vec3 = Eigen::Vector3d;

struct Atom {
  std::string symbol;
  int charge = 0;  // nuclear charge Z
  Vec3 position = Vec3::Zero();  // bohr
};

enum class LengthUnit { angstrom, bohr };

/// A molecular geometry in bohr. Construction validates that nuclear charges
/// are positive and that no two atoms coincide.
class Geometry {
 public:
  Geometry() = default;
  explicit Geometry(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  int total_nuclear_charge() const;
  double nuclear_repulsion() const;

  /// Rigid-body copy: positions mapped to rotation * r + shift.
  Geometry transformed(const Eigen::Matrix3d& rotation, const Vec3& shift) const;

 private:
  std::vector<Atom> atoms_;
};

/// Atomic number for an element symbol (case-insensitive), or 0 if unknown.
int atomic_number(std::string_view symbol);
/// Canonical capitalization of an element symbol ("he" -> "He").
std::string canonical_symbol(std::string_view symbol);

/// Parses standard XYZ text: atom count, comment line, then `El x y z` rows.
Geometry parse_xyz(std::string_view text, LengthUnit unit = LengthUnit::angstrom);
Geometry read_xyz(const std::string& path, LengthUnit unit = LengthUnit::angstrom);

}  // namespace solvaq::chem
