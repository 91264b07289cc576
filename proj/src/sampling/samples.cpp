#include "solvaq/sampling/samples.hpp"

#include "solvaq/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace solvaq::sampling {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw DomainError("Rng::below needs n > 0");
  const std::uint64_t limit = max() - max() % n;
  for (;;) {
    const std::uint64_t x = (*this)();
    if (x < limit) return x % n;
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc908ULL);
  for (std::uint64_t tag : path) h = mix64(h + Rng::kGolden + mix64(tag + 0x3c6ef372fe94f82bULL));
  return h;
}

SampleSet::SampleSet(int n_orb) : n_orb_(n_orb) {
  if (n_orb < 0 || n_orb > kMaxOrbitals)
    throw CapacityError("sample sets support up to " + std::to_string(kMaxOrbitals) + " orbitals");
}

void SampleSet::add(const Configuration& c, std::uint64_t count) {
  if (count == 0) return;
  const Bits outside = ~orbital_mask(n_orb_);
  if ((c.alpha & outside) || (c.beta & outside))
    throw DomainError("configuration has bits beyond n_orb");
  counts_[c] += count;
  total_ += count;
}

void SampleSet::merge(const SampleSet& other) {
  if (other.n_orb_ != n_orb_) throw DomainError("cannot merge sample sets of different n_orb");
  for (const auto& [c, n] : other.counts_) add(c, n);
}

std::vector<Configuration> SampleSet::expand() const {
  std::vector<Configuration> out;
  out.reserve(total_);
  for (const auto& [c, n] : counts_) out.insert(out.end(), n, c);
  return out;
}

void NoiseModel::validate() const {
  if (!(flip_probability >= 0.0 && flip_probability < 1.0))
    throw ConfigError("bit-flip probability must lie in [0, 1)");
}

SampleSet sample_exact(int n_orb, std::span<const Configuration> determinants,
                       std::span<const double> amplitudes, std::uint64_t n_shots,
                       std::uint64_t seed) {
  if (determinants.size() != amplitudes.size())
    throw DomainError("determinant and amplitude lists differ in length");
  std::vector<double> cdf(amplitudes.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    acc += amplitudes[i] * amplitudes[i];
    cdf[i] = acc;
  }
  if (!(std::abs(acc - 1.0) <= 1e-10))
    throw DomainError("CI vector is not normalized (norm^2 = " + std::to_string(acc) + ")");

  SampleSet out(n_orb);
  Rng rng(seed);
  std::vector<std::uint64_t> hits(amplitudes.size(), 0);
  for (std::uint64_t s = 0; s < n_shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    // skip zero-probability entries that share the cumulative value
    auto k = static_cast<std::size_t>(it - cdf.begin());
    while (amplitudes[k] == 0.0 && k + 1 < cdf.size()) ++k;
    ++hits[k];
  }
  for (std::size_t i = 0; i < hits.size(); ++i) out.add(determinants[i], hits[i]);
  return out;
}

SampleSet apply_noise(const SampleSet& samples, const NoiseModel& noise) {
  noise.validate();
  if (noise.flip_probability == 0.0) return samples;
  const int n = samples.n_orb();
  const double p = noise.flip_probability;
  SampleSet out(n);
  Rng rng(noise.seed);
  for (const auto& [c, count] : samples.counts()) {
    for (std::uint64_t s = 0; s < count; ++s) {
      Configuration x = c;
      for (int b = 0; b < n; ++b)
        if (rng.uniform() < p) x.alpha ^= Bits{1} << b;
      for (int b = 0; b < n; ++b)
        if (rng.uniform() < p) x.beta ^= Bits{1} << b;
      out.add(x);
    }
  }
  return out;
}

std::string to_bitstring(Bits bits, int n_orb) {
  std::string s(static_cast<std::size_t>(n_orb), '0');
  for (int p = 0; p < n_orb; ++p)
    if (bits >> p & 1) s[static_cast<std::size_t>(n_orb - 1 - p)] = '1';
  return s;
}

Bits from_bitstring(const std::string& text) {
  if (text.size() > static_cast<std::size_t>(kMaxOrbitals))
    throw DomainError("bitstring longer than " + std::to_string(kMaxOrbitals));
  Bits b = 0;
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw DomainError("non-binary character in '" + text + "'");
    b = (b << 1) | static_cast<Bits>(ch == '1');
  }
  return b;
}

SampleSet parse_samples(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n_orb = -1;
  SampleSet out(0);
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string a, b, extra;
    if (!(row >> a)) continue;
    if (n_orb < 0) {
      if (a.rfind("n_orb=", 0) != 0 || (row >> extra))
        throw ParseError("expected header 'n_orb=N'", line_no);
      try {
        std::size_t used = 0;
        n_orb = std::stoi(a.substr(6), &used);
        if (used != a.size() - 6) throw std::invalid_argument(a);
      } catch (const std::exception&) {
        throw ParseError("bad orbital count in header", line_no);
      }
      if (n_orb < 1 || n_orb > kMaxOrbitals)
        throw ParseError("n_orb must lie in [1, " + std::to_string(kMaxOrbitals) + "]", line_no);
      out = SampleSet(n_orb);
      continue;
    }
    std::string count_text;
    if (!(row >> b >> count_text) || (row >> extra))
      throw ParseError("expected 'ALPHA BETA COUNT'", line_no);
    if (a.size() != static_cast<std::size_t>(n_orb) || b.size() != static_cast<std::size_t>(n_orb))
      throw ParseError("bitstring length differs from n_orb=" + std::to_string(n_orb), line_no);
    Configuration c;
    try {
      c.alpha = from_bitstring(a);
      c.beta = from_bitstring(b);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (count_text.empty() || !std::all_of(count_text.begin(), count_text.end(), ::isdigit))
      throw ParseError("count must be a positive integer", line_no);
    const auto count = std::stoull(count_text);
    if (count == 0) throw ParseError("count must be a positive integer", line_no);
    out.add(c, count);
  }
  if (n_orb < 0) return SampleSet(0);
  return out;
}

SampleSet read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open samples file " + path);
  return parse_samples(in);
}

void write_samples(const SampleSet& samples, std::ostream& out) {
  out << "n_orb=" << samples.n_orb() << '\n';
  for (const auto& [c, n] : samples.counts())
    out << to_bitstring(c.alpha, samples.n_orb()) << ' ' << to_bitstring(c.beta, samples.n_orb())
        << ' ' << n << '\n';
}

void write_samples(const SampleSet& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write samples file " + path);
  write_samples(samples, out);
}

}  // namespace solvaq::sampling
