#include "solvaq/active/active_space.hpp"

#include "solvaq/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace solvaq::active {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_line(std::ostream& out, double v, int i, int j, int k, int l) {
  out << format_value(v) << ' ' << i << ' ' << j << ' ' << k << ' ' << l << '\n';
}

// Value of KEY=... inside the namelist header, or -1 when absent.
int header_int(const std::string& header, const std::string& key) {
  const std::regex re("\\b" + key + "\\s*=\\s*(-?\\d+)", std::regex::icase);
  std::smatch m;
  if (!std::regex_search(header, m, re)) return -1;
  return std::stoi(m[1].str());
}

double parse_fortran_double(std::string tok, int line) {
  std::replace_if(tok.begin(), tok.end(), [](char c) { return c == 'D' || c == 'd'; }, 'e');
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integral value '" + tok + "'", line);
  }
}

}  // namespace

void fcidump_write(const ActiveHamiltonian& h, std::ostream& out) {
  const int n = h.n_orb;
  out << " &FCI NORB=" << n << ",NELEC=" << h.n_alpha + h.n_beta
      << ",MS2=" << h.n_alpha - h.n_beta << ",\n  ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (chem::pair_index(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) <
              chem::pair_index(static_cast<std::size_t>(k), static_cast<std::size_t>(l)))
            continue;
          const double v = h.eri(i, j, k, l);
          if (v != 0.0) write_line(out, v, i + 1, j + 1, k + 1, l + 1);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (h.h_eff(i, j) != 0.0) write_line(out, h.h_eff(i, j), i + 1, j + 1, 0, 0);
  write_line(out, h.e_frozen, 0, 0, 0, 0);
}

void fcidump_write(const ActiveHamiltonian& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write FCIDUMP file " + path);
  fcidump_write(h, out);
}

ActiveHamiltonian fcidump_read(std::istream& in) {
  std::string header, line;
  int line_no = 0;
  bool closed = false;
  while (std::getline(in, line)) {
    ++line_no;
    header += line + ' ';
    std::string upper = line;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper.find("&END") != std::string::npos || upper.find('/') != std::string::npos) {
      closed = true;
      break;
    }
  }
  if (!closed) throw ParseError("FCIDUMP header is not terminated", line_no);
  const int norb = header_int(header, "NORB");
  const int nelec = header_int(header, "NELEC");
  int ms2 = header_int(header, "MS2");
  if (ms2 < 0) ms2 = 0;
  if (norb <= 0 || nelec < 0) throw ParseError("FCIDUMP header lacks NORB or NELEC", line_no);
  if (norb > kMaxActiveOrbitals)
    throw CapacityError("FCIDUMP has " + std::to_string(norb) + " orbitals, cap is " +
                        std::to_string(kMaxActiveOrbitals));
  if ((nelec + ms2) % 2 != 0 || nelec - ms2 < 0)
    throw ParseError("inconsistent NELEC and MS2", line_no);

  ActiveHamiltonian h;
  h.n_orb = norb;
  h.n_alpha = (nelec + ms2) / 2;
  h.n_beta = (nelec - ms2) / 2;
  if (h.n_alpha > norb) throw ParseError("more electrons than spin orbitals", line_no);
  h.h_eff = Matrix::Zero(norb, norb);
  h.eri = chem::EriTensor(norb);

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::string tok;
    if (!(row >> tok)) continue;
    const double v = parse_fortran_double(tok, line_no);
    int idx[4];
    for (int& x : idx)
      if (!(row >> x)) throw ParseError("integral row needs four indices", line_no);
    for (int x : idx)
      if (x < 0 || x > norb) throw ParseError("orbital index out of range", line_no);
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      h.e_frozen = v;
    } else if (k == 0 && l == 0 && i > 0 && j > 0) {
      h.h_eff(i - 1, j - 1) = h.h_eff(j - 1, i - 1) = v;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      h.eri.set(i - 1, j - 1, k - 1, l - 1, v);
    } else {
      // orbital energies (i 0 0 0) are informational only
      if (!(j == 0 && k == 0 && l == 0))
        throw ParseError("malformed index pattern", line_no);
    }
  }
  return h;
}

ActiveHamiltonian fcidump_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open FCIDUMP file " + path);
  return fcidump_read(in);
}

}  // namespace solvaq::active
