#include "solvaq/chem/geometry.hpp"

#include "solvaq/error.hpp"
#include "solvaq/units.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace solvaq::chem {

namespace {

constexpr std::array<std::string_view, 36> kSymbols = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
    "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
    "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr"};

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

std::string canonical_symbol(std::string_view symbol) {
  std::string out;
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    auto c = static_cast<unsigned char>(symbol[i]);
    out.push_back(static_cast<char>(i == 0 ? std::toupper(c) : std::tolower(c)));
  }
  return out;
}

int atomic_number(std::string_view symbol) {
  const std::string canon = canonical_symbol(symbol);
  for (std::size_t z = 0; z < kSymbols.size(); ++z)
    if (kSymbols[z] == canon) return static_cast<int>(z) + 1;
  return 0;
}

Geometry::Geometry(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].charge < 1)
      throw DomainError("atom " + std::to_string(i) + " has nuclear charge < 1");
    for (std::size_t j = 0; j < i; ++j)
      if ((atoms_[i].position - atoms_[j].position).norm() <= 0.0)
        throw DomainError("atoms " + std::to_string(j) + " and " + std::to_string(i) +
                          " coincide");
  }
}

int Geometry::total_nuclear_charge() const {
  int z = 0;
  for (const auto& a : atoms_) z += a.charge;
  return z;
}

double Geometry::nuclear_repulsion() const {
  double e = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      e += atoms_[i].charge * atoms_[j].charge /
           (atoms_[i].position - atoms_[j].position).norm();
  return e;
}

Geometry Geometry::transformed(const Eigen::Matrix3d& rotation, const Vec3& shift) const {
  auto atoms = atoms_;
  for (auto& a : atoms) a.position = rotation * a.position + shift;
  return Geometry(std::move(atoms));
}

Geometry parse_xyz(std::string_view text, LengthUnit unit) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty XYZ input", 1);

  std::istringstream head(lines[0]);
  long count = -1;
  if (!(head >> count) || count < 0) throw ParseError("expected atom count", 1);
  std::string trailing;
  if (head >> trailing) throw ParseError("unexpected text after atom count", 1);

  const double scale = unit == LengthUnit::angstrom ? units::kBohrPerAngstrom : 1.0;
  std::vector<Atom> atoms;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    std::istringstream row(lines[i]);
    std::string sym;
    if (!(row >> sym)) continue;  // blank line
    if (static_cast<long>(atoms.size()) == count)
      throw ParseError("more atom rows than the declared count " + std::to_string(count),
                       lineno);
    double x, y, z;
    if (!(row >> x >> y >> z)) throw ParseError("expected element and 3 coordinates", lineno);
    if (row >> trailing) throw ParseError("unexpected text after coordinates", lineno);
    const int znuc = atomic_number(sym);
    if (znuc == 0) throw ParseError("unknown element '" + sym + "'", lineno);
    atoms.push_back({canonical_symbol(sym), znuc, Vec3(x, y, z) * scale});
  }
  if (static_cast<long>(atoms.size()) != count)
    throw ParseError("atom count mismatch: declared " + std::to_string(count) + ", found " +
                         std::to_string(atoms.size()),
                     static_cast<int>(lines.size()));
  return Geometry(std::move(atoms));
}

Geometry read_xyz(const std::string& path, LengthUnit unit) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open geometry file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_xyz(buf.str(), unit);
}

}  // namespace solvaq::chem
