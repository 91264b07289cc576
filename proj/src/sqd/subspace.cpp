#include "solvaq/sqd/subspace.hpp"

#include "solvaq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace solvaq::sqd {

using sampling::popcount;
using sampling::Rng;

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > std::numeric_limits<std::uint64_t>::max())
      throw CapacityError("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

std::uint64_t hilbert_dimension(int n_orb, int n_alpha, int n_beta) {
  if (n_orb < 0 || n_alpha < 0 || n_beta < 0 || n_alpha > n_orb || n_beta > n_orb)
    throw DomainError("electron counts must lie in [0, n_orb]");
  const unsigned __int128 d =
      static_cast<unsigned __int128>(binomial(n_orb, n_alpha)) * binomial(n_orb, n_beta);
  if (d > std::numeric_limits<std::uint64_t>::max())
    throw CapacityError("Hilbert dimension overflows 64 bits");
  return static_cast<std::uint64_t>(d);
}

std::vector<Bits> all_strings(int n_orb, int n_elec) {
  if (n_orb > sampling::kMaxOrbitals || n_elec < 0 || n_elec > n_orb)
    throw DomainError("invalid string space");
  std::vector<Bits> out;
  if (n_elec == 0) return {0};
  // Gosper's hack enumerates same-weight words in ascending order
  Bits s = (Bits{1} << n_elec) - 1;
  const Bits limit = Bits{1} << n_orb;
  while (s < limit) {
    out.push_back(s);
    const Bits c = s & -s;
    const Bits r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

OccupationDistribution init_occupations(const SampleSet& samples, int n_alpha, int n_beta) {
  const int n = samples.n_orb();
  OccupationDistribution occ{Vector::Zero(n), Vector::Zero(n)};
  std::uint64_t good = 0;
  for (const auto& [c, count] : samples.counts()) {
    if (popcount(c.alpha) != n_alpha || popcount(c.beta) != n_beta) continue;
    good += count;
    for (int p = 0; p < n; ++p) {
      occ.up(p) += static_cast<double>(count) * static_cast<double>(c.alpha >> p & 1);
      occ.down(p) += static_cast<double>(count) * static_cast<double>(c.beta >> p & 1);
    }
  }
  if (good == 0)
    throw DomainError("no sampled configuration has the target particle numbers; "
                      "increase the number of shots");
  occ.up /= static_cast<double>(good);
  occ.down /= static_cast<double>(good);
  return occ;
}

namespace {

// Flip bits of s until its weight equals target.
Bits repair(Bits s, int target, int n_orb, const Vector& occ, Rng& rng, std::uint64_t& fallbacks) {
  int w = popcount(s);
  std::vector<double> weight(static_cast<std::size_t>(n_orb));
  while (w != target) {
    const bool remove = w > target;
    double sum = 0.0;
    int eligible = 0;
    for (int p = 0; p < n_orb; ++p) {
      const bool occupied = s >> p & 1;
      double wt = 0.0;
      if (occupied == remove) {
        wt = std::abs((occupied ? 1.0 : 0.0) - occ(p));
        ++eligible;
      }
      weight[static_cast<std::size_t>(p)] = wt;
      sum += wt;
    }
    int pick = -1;
    if (sum > 0.0) {
      const double u = rng.uniform() * sum;
      double acc = 0.0;
      for (int p = 0; p < n_orb; ++p) {
        if (weight[static_cast<std::size_t>(p)] == 0.0) continue;
        acc += weight[static_cast<std::size_t>(p)];
        pick = p;
        if (u < acc) break;
      }
    } else {
      ++fallbacks;
      auto k = static_cast<int>(rng.below(static_cast<std::uint64_t>(eligible)));
      for (int p = 0; p < n_orb; ++p)
        if (bool(s >> p & 1) == remove && k-- == 0) {
          pick = p;
          break;
        }
    }
    s ^= Bits{1} << pick;
    w += remove ? -1 : 1;
  }
  return s;
}

}  // namespace

RecoveredSet recover(const SampleSet& samples, const OccupationDistribution& occ, int n_alpha,
                     int n_beta, std::uint64_t seed) {
  const int n = samples.n_orb();
  if (occ.up.size() != n || occ.down.size() != n)
    throw DomainError("occupation distribution does not match n_orb");
  if (n_alpha < 0 || n_alpha > n || n_beta < 0 || n_beta > n)
    throw DomainError("electron counts must lie in [0, n_orb]");
  RecoveredSet out{SampleSet(n), 0, 0};
  Rng rng(seed);
  for (const auto& [c, count] : samples.counts()) {
    if (popcount(c.alpha) == n_alpha && popcount(c.beta) == n_beta) {
      out.samples.add(c, count);
      continue;
    }
    out.corrected_shots += count;
    for (std::uint64_t s = 0; s < count; ++s) {
      Configuration x;
      x.alpha = repair(c.alpha, n_alpha, n, occ.up, rng, out.uniform_fallbacks);
      x.beta = repair(c.beta, n_beta, n, occ.down, rng, out.uniform_fallbacks);
      out.samples.add(x);
    }
  }
  return out;
}

std::vector<Batch> draw_batches(const SampleSet& recovered, int n_batches, std::size_t batch_size,
                                std::uint64_t seed) {
  if (n_batches < 1) throw ConfigError("number of batches must be >= 1");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (recovered.empty()) throw DomainError("cannot draw batches from an empty sample set");
  const std::vector<Configuration> pool = recovered.expand();
  std::vector<Batch> out(static_cast<std::size_t>(n_batches));
  std::vector<std::size_t> order(pool.size());
  for (int b = 0; b < n_batches; ++b) {
    Rng rng(sampling::derive_seed(seed, {static_cast<std::uint64_t>(b)}));
    Batch& batch = out[static_cast<std::size_t>(b)];
    batch.reserve(batch_size);
    if (batch_size > pool.size()) {
      for (std::size_t i = 0; i < batch_size; ++i) batch.push_back(pool[rng.below(pool.size())]);
      continue;
    }
    // partial Fisher-Yates
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < batch_size; ++i) {
      const std::size_t j = i + rng.below(pool.size() - i);
      std::swap(order[i], order[j]);
      batch.push_back(pool[order[i]]);
    }
  }
  return out;
}

SubspaceBasis::SubspaceBasis(int n_orb, int n_elec, std::vector<Bits> strings)
    : n_orb_(n_orb), n_elec_(n_elec), strings_(std::move(strings)) {
  if (n_orb < 1 || n_orb > sampling::kMaxOrbitals) throw DomainError("invalid orbital count");
  std::sort(strings_.begin(), strings_.end());
  strings_.erase(std::unique(strings_.begin(), strings_.end()), strings_.end());
  for (Bits s : strings_)
    if (popcount(s) != n_elec || (s & ~sampling::orbital_mask(n_orb)))
      throw DomainError("subspace string with the wrong weight or width");
  if (strings_.empty()) throw DomainError("empty subspace");
}

SubspaceBasis SubspaceBasis::full(int n_orb, int n_elec) {
  return SubspaceBasis(n_orb, n_elec, all_strings(n_orb, n_elec));
}

std::ptrdiff_t SubspaceBasis::find(Bits s) const {
  const auto it = std::lower_bound(strings_.begin(), strings_.end(), s);
  if (it == strings_.end() || *it != s) return -1;
  return it - strings_.begin();
}

Configuration SubspaceBasis::determinant(std::size_t index) const {
  return {strings_[index / size()], strings_[index % size()]};
}

std::vector<Configuration> SubspaceBasis::determinants() const {
  std::vector<Configuration> out;
  out.reserve(dimension());
  for (Bits a : strings_)
    for (Bits b : strings_) out.push_back({a, b});
  return out;
}

SubspaceBasis build_subspace(const Batch& batch, int n_orb, int n_alpha, int n_beta) {
  if (n_alpha != n_beta)
    throw ConfigError("only closed-shell targets with n_alpha == n_beta are supported");
  if (batch.empty()) throw DomainError("empty batch");
  std::vector<Bits> u;
  u.reserve(2 * batch.size());
  for (const auto& c : batch) {
    u.push_back(c.alpha);
    u.push_back(c.beta);
  }
  return SubspaceBasis(n_orb, n_alpha, std::move(u));
}

}  // namespace solvaq::sqd
