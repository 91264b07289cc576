#include "solvaq/chem/boys.hpp"

#include "solvaq/error.hpp"

#include <cmath>
#include <numbers>

namespace solvaq::chem {

namespace {
constexpr double kSeriesLimit = 25.0;
}

void boys(int m_max, double t, double* out) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("Boys function argument must be finite and >= 0");
  if (m_max < 0 || m_max > kMaxBoysOrder) throw DomainError("Boys order outside 0..16");

  if (t < kSeriesLimit) {
    // F_m(t) = exp(-t) * sum_k (2t)^k / ((2m+1)(2m+3)...(2m+2k+1))
    double term = 1.0 / (2 * m_max + 1);
    double sum = term;
    for (int k = 1; k < 500; ++k) {
      term *= 2.0 * t / (2 * m_max + 2 * k + 1);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    const double et = std::exp(-t);
    out[m_max] = et * sum;
    for (int m = m_max - 1; m >= 0; --m) out[m] = (2.0 * t * out[m + 1] + et) / (2 * m + 1);
    return;
  }

  // Asymptotic regime: sqrt(pi/4t) with its exact erf correction, then upward
  // recursion, which is stable for t > m_max.
  const double et = std::exp(-t);
  out[0] = 0.5 * std::sqrt(std::numbers::pi / t) * std::erf(std::sqrt(t));
  for (int m = 0; m < m_max; ++m) out[m + 1] = ((2 * m + 1) * out[m] - et) / (2.0 * t);
}

std::vector<double> boys(int m_max, double t) {
  std::vector<double> f(static_cast<std::size_t>(m_max < 0 ? 0 : m_max) + 1);
  boys(m_max, t, f.data());
  return f;
}

}  // namespace solvaq::chem
