#pragma once

#include <vector>

namespace solvaq::chem {

inline constexpr int kMaxBoysOrder = 16;

/// F_m(t) = \int_0^1 u^{2m} exp(-t u^2) du for m = 0..m_max, written to out.
/// Series plus downward recursion for t < 25; erf closed form for F_0 and
/// upward recursion above. Throws DomainError for t < 0 or m_max > 16.
void boys(int m_max, double t, double* out);

std::vector<double> boys(int m_max, double t);

}  // namespace solvaq::chem
