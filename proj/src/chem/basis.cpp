#include "solvaq/chem/basis.hpp"

#include "solvaq/error.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace solvaq::chem {

namespace {

double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

// Normalization of x^l exp(-a r^2).
double primitive_norm(double a, int l) {
  return std::pow(2.0 * a / std::numbers::pi, 0.75) * std::pow(4.0 * a, 0.5 * l) /
         std::sqrt(double_factorial(2 * l - 1));
}

int parse_l(const std::string& tok, int lineno) {
  if (tok.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(tok[0]))) {
      case 'S': return 0;
      case 'P': return 1;
      case 'D': return 2;
      default: break;
    }
  }
  try {
    std::size_t used = 0;
    const int l = std::stoi(tok, &used);
    if (used == tok.size()) {
      if (l < 0 || l > kMaxAngularMomentum)
        throw ParseError("angular momentum " + tok + " outside 0..2", lineno);
      return l;
    }
  } catch (const std::logic_error&) {
  }
  throw ParseError("bad angular momentum '" + tok + "'", lineno);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

BasisLibrary parse_basis_library(std::string_view text) {
  BasisLibrary lib;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  std::string element;
  while (std::getline(in, raw)) {
    ++lineno;
    std::istringstream row(strip_comment(raw));
    std::string first;
    if (!(row >> first)) continue;
    if (first == "****") {
      if (element.empty()) throw ParseError("'****' without an open element", lineno);
      element.clear();
      continue;
    }
    if (element.empty()) {
      if (atomic_number(first) == 0) throw ParseError("unknown element '" + first + "'", lineno);
      element = canonical_symbol(first);
      lib[element];
      continue;
    }
    ShellTemplate shell;
    shell.l = parse_l(first, lineno);
    long nprim = 0;
    if (!(row >> nprim) || nprim < 1) throw ParseError("expected `L n_prim`", lineno);
    for (long k = 0; k < nprim; ++k) {
      if (!std::getline(in, raw)) throw ParseError("unexpected end of shell", lineno);
      ++lineno;
      std::istringstream prow(strip_comment(raw));
      Primitive p;
      if (!(prow >> p.exponent >> p.coefficient))
        throw ParseError("expected `exponent coefficient`", lineno);
      if (!(p.exponent > 0.0)) throw ParseError("exponent must be positive", lineno);
      shell.primitives.push_back(p);
    }
    lib[element].push_back(std::move(shell));
  }
  if (!element.empty()) throw ParseError("element " + element + " not terminated by ****", lineno);
  return lib;
}

BasisLibrary read_basis_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open basis file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_basis_library(buf.str());
}

Shell::Shell(int atom, const Vec3& center, int l, std::vector<Primitive> primitives)
    : atom_(atom), center_(center), l_(l), primitives_(std::move(primitives)) {
  if (l_ < 0 || l_ > kMaxAngularMomentum) throw DomainError("shell angular momentum outside 0..2");
  if (primitives_.empty()) throw DomainError("shell without primitives");
  scaled_.resize(primitives_.size());
  for (std::size_t k = 0; k < primitives_.size(); ++k) {
    if (!(primitives_[k].exponent > 0.0)) throw DomainError("non-positive exponent");
    scaled_[k] = primitives_[k].coefficient * primitive_norm(primitives_[k].exponent, l_);
  }
  // self-overlap of the contracted x^L component
  double s = 0.0;
  for (std::size_t i = 0; i < primitives_.size(); ++i)
    for (std::size_t j = 0; j < primitives_.size(); ++j) {
      const double p = primitives_[i].exponent + primitives_[j].exponent;
      s += scaled_[i] * scaled_[j] * std::pow(std::numbers::pi / p, 1.5) *
           double_factorial(2 * l_ - 1) / std::pow(2.0 * p, l_);
    }
  const double f = 1.0 / std::sqrt(s);
  for (auto& c : scaled_) c *= f;
}

Shell Shell::translated(const Vec3& shift) const {
  Shell s = *this;
  s.center_ += shift;
  return s;
}

std::string AOLabel::shell_label() const {
  static constexpr char kLetters[] = "spd";
  return element + " " + std::to_string(principal) + kLetters[l];
}

AOBasis::AOBasis(std::vector<Shell> shells, std::vector<std::string> elements)
    : shells_(std::move(shells)), elements_(std::move(elements)) {
  std::map<std::pair<int, int>, int> seen;  // (atom, l) -> count
  for (std::size_t s = 0; s < shells_.size(); ++s) {
    const auto& sh = shells_[s];
    offsets_.push_back(n_ao_);
    const int principal = sh.l() + 1 + seen[{sh.atom(), sh.l()}]++;
    for (int m = 0; m < sh.n_spherical(); ++m)
      labels_.push_back({sh.atom(), static_cast<int>(s), sh.l(), m, principal,
                         elements_.at(static_cast<std::size_t>(sh.atom()))});
    n_ao_ += sh.n_spherical();
  }
}

std::vector<int> AOBasis::select(const std::vector<std::string>& targets) const {
  std::vector<std::string> wanted;
  for (const auto& t : targets) {
    std::istringstream in(t);
    std::string el, sh;
    in >> el >> sh;
    for (auto& c : sh) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    wanted.push_back(canonical_symbol(el) + " " + sh);
  }
  std::vector<int> out;
  for (int i = 0; i < n_ao_; ++i) {
    const auto label = labels_[static_cast<std::size_t>(i)].shell_label();
    for (const auto& w : wanted)
      if (w == label) {
        out.push_back(i);
        break;
      }
  }
  return out;
}

AOBasis AOBasis::translated(const Vec3& shift) const {
  std::vector<Shell> shells;
  shells.reserve(shells_.size());
  for (const auto& s : shells_) shells.push_back(s.translated(shift));
  return AOBasis(std::move(shells), elements_);
}

AOBasis build_basis(const Geometry& geometry, const BasisLibrary& library) {
  std::vector<Shell> shells;
  std::vector<std::string> elements;
  for (std::size_t a = 0; a < geometry.size(); ++a) {
    const auto& atom = geometry[a];
    elements.push_back(atom.symbol);
    const auto it = library.find(atom.symbol);
    if (it == library.end()) throw ConfigError("basis has no entry for element " + atom.symbol);
    for (const auto& t : it->second)
      shells.emplace_back(static_cast<int>(a), atom.position, t.l, t.primitives);
  }
  return AOBasis(std::move(shells), std::move(elements));
}

std::vector<std::array<int, 3>> cartesian_components(int l) {
  std::vector<std::array<int, 3>> out;
  for (int lx = l; lx >= 0; --lx)
    for (int ly = l - lx; ly >= 0; --ly) out.push_back({lx, ly, l - lx - ly});
  return out;
}

const std::vector<double>& spherical_transform(int l) {
  static const std::vector<double> s = {1.0};
  static const std::vector<double> p = {1, 0, 0,  //
                                        0, 1, 0,  //
                                        0, 0, 1};
  static const double r3 = std::sqrt(3.0);
  // columns: xx xy xz yy yz zz
  static const std::vector<double> d = {0,    r3, 0,  0,         0,  0,    // xy
                                        0,    0,  0,  0,         r3, 0,    // yz
                                        -0.5, 0,  0,  -0.5,      0,  1.0,  // z2
                                        0,    0,  r3, 0,         0,  0,    // xz
                                        r3 / 2, 0, 0, -r3 / 2,   0,  0};   // x2-y2
  switch (l) {
    case 0: return s;
    case 1: return p;
    case 2: return d;
    default: throw DomainError("angular momentum above 2");
  }
}

}  // namespace solvaq::chem
