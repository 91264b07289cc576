// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "oracle.hpp"

#include "solvaq/app/pipeline.hpp"
#include "solvaq/error.hpp"
#include "solvaq/pcm/pcm.hpp"
#include "solvaq/scf/rhf.hpp"
#include "solvaq/sqd/engine.hpp"
#include "solvaq/units.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace solvaq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Every batch energy produced by any SQD run below, with its full-space reference.
struct VariationalRecord {
  std::string run;
  double batch_energy;
  double reference;
};
std::vector<VariationalRecord> g_batches;

bool covers(const sqd::SQDResult& r, std::uint64_t d_as) {
  for (const auto& b : r.iterations.back())
    if (b.error.empty() && b.d == d_as) return true;
  return false;
}

void record(const std::string& run, const sqd::SQDResult& r, double reference) {
  for (const auto& it : r.iterations)
    for (const auto& b : it)
      if (b.error.empty()) g_batches.push_back({run, b.energy, reference});
}

app::RunConfig sampled(const std::string& molecule, bool solvated, double noise, std::uint64_t shots) {
  auto c = testing::molecule_config(molecule, solvated);
  c.sampler.shots = shots;
  c.sampler.noise = noise;
  return c;
}

// SQD on top of a prepared system, sampling from its full-space ground state.
struct Sampled {
  sqd::BatchResult reference;
  sqd::SQDResult result;
};

Sampled run_sampled(const app::RunConfig& config, const app::PreparedSystem& s) {
  Sampled out;
  out.reference = sqd::casci(s.hamiltonian, s.solvent_context(), config.sqd);
  const auto samples = app::make_samples(config, s, &out.reference);
  out.result = sqd::run_sqd(s.hamiltonian, s.solvent_context(), samples, config.sqd);
  return out;
}

pcm::Vector ion_potential(const pcm::CavitySurface& s) {
  pcm::Vector phi(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) phi(static_cast<Eigen::Index>(i)) = 1.0 / s.tesserae[i].position.norm();
  return phi;
}

pcm::CavitySurface ion_cavity(int points) {
  pcm::CavityConfig c;
  c.radii = {{"H", 2.0}};
  c.scale = 1.0;
  c.points_per_sphere = points;
  return pcm::build_cavity(chem::Geometry({chem::Atom{"H", 1, chem::Vec3::Zero()}}), c);
}

// ---------------------------------------------------------------------------

Outcome born_ion() {
  Outcome o;
  const auto start = Clock::now();
  const double eps = 80.0, exact = -(1.0 - 1.0 / eps) / (2.0 * 2.0);
  double previous = 1e300, last = 0.0, g590 = 0.0;
  for (int n : {110, 194, 302, 590}) {
    const auto s = ion_cavity(n);
    const auto sol = pcm::solve_surface_charge(pcm::assemble_operators(s), {eps}, ion_potential(s));
    const double err = std::abs(sol.polarization_energy - exact) / std::abs(exact);
    o.require(err < previous, "error not decreasing at " + std::to_string(n) + " tesserae");
    previous = err;
    last = err;
    g590 = sol.polarization_energy;
  }
  o.require(last < 0.01, "590-point error above 1%");
  const double t = seconds_since(start);
  o.require(t < 5.0, "runtime");
  o.note("dG(590) = " + fmt("%.6f", g590) + " Eh, rel. error " + fmt("%.2e", last) + ", " + fmt("%.2f", t) + " s");
  return o;
}

Outcome gauss_law() {
  Outcome o;
  const double eps = 80.0;
  const auto s = ion_cavity(590);
  const auto ops = pcm::assemble_operators(s);
  const auto phi = ion_potential(s);
  const double total = pcm::solve_surface_charge(ops, {eps}, phi).charges.sum();
  o.require(std::abs(total + (eps - 1.0) / eps) <= 0.01, "total charge");
  double worst = 0.0;
  for (double e : {1.0 + 1e-8, 1.0 + 1e-10, 1.0})
    worst = std::max(worst, pcm::solve_surface_charge(ops, {e}, phi).charges.cwiseAbs().maxCoeff());
  o.require(worst < 1e-6, "charges do not vanish as eps -> 1");
  o.note("sum q = " + fmt("%.5f", total) + " (target " + fmt("%.5f", -(eps - 1.0) / eps) + "), max|q| near eps=1: " +
         fmt("%.1e", worst));
  return o;
}

Outcome rhf_references() {
  Outcome o;
  struct Case {
    const char* name;
    double target;
  };
  for (const auto& c : {Case{"h2", -1.11675}, Case{"he", -2.80778}}) {
    const auto start = Clock::now();
    const auto s = app::prepare_scf(testing::molecule_config(c.name, false));
    const double t = seconds_since(start);
    o.require(s.scf.converged, std::string(c.name) + " not converged");
    o.require(std::abs(s.scf.energy - c.target) < 1e-4, std::string(c.name) + " energy");
    o.require(t < 1.0, std::string(c.name) + " runtime");
    o.note(std::string(c.name) + " " + fmt("%.7f", s.scf.energy) + " Eh in " + fmt("%.3f", t) + " s");
  }
  return o;
}

Outcome full_coverage() {
  Outcome o;
  const auto start = Clock::now();
  for (const std::string molecule : {"h2", "water"})
    for (bool solvated : {false, true}) {
      auto config = sampled(molecule, solvated, 0.2, 20000);
      config.sqd.n_batches = 4;
      config.sqd.batch_size = 10000;
      config.sqd.iterations = 2;
      config.sqd.seed = 3;
      std::ostringstream sink;
      const auto casci = app::cmd_casci(config, sink);
      const auto s = testing::prepare(config);
      const auto run = run_sampled(config, s);
      const double e_casci = casci.report["casci"]["energy_hartree"].get<double>();
      const auto d_as = sqd::hilbert_dimension(s.hamiltonian.n_orb, s.hamiltonian.n_alpha, s.hamiltonian.n_beta);
      const std::string label = molecule + (solvated ? "/pcm" : "/gas");
      record("full coverage " + label, run.result, e_casci);
      o.require(covers(run.result, d_as), label + " subspace does not cover the space");
      o.require(std::abs(run.result.energy - e_casci) < 1e-8, label + " energy");
      o.note(label + " |dE| = " + fmt("%.1e", std::abs(run.result.energy - e_casci)));
    }
  const double t = seconds_since(start);
  o.require(t < 120.0, "runtime");
  o.note(fmt("%.1f", t) + " s");
  return o;
}

Outcome hilbert_dimensions() {
  Outcome o;
  struct Case {
    int n, a, b;
    double scaled;  // D / 1e5, three decimals
  };
  const auto start = Clock::now();
  std::vector<std::uint64_t> got;
  const std::vector<Case> cases = {{12, 7, 7, 6.273}, {13, 7, 7, 29.447}, {18, 10, 10, 19147.626}, {23, 4, 4, 784.110}};
  for (const auto& c : cases) got.push_back(sqd::hilbert_dimension(c.n, c.a, c.b));
  const double t = seconds_since(start);
  const std::vector<std::uint64_t> exact = {627264ULL, 2944656ULL, 1914762564ULL, 78411025ULL};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    o.require(got[i] == exact[i], "D_AS for n_orb = " + std::to_string(cases[i].n));
    o.require(std::round(static_cast<double>(got[i]) / 100.0) / 1000.0 == cases[i].scaled,
              "rounded value for n_orb = " + std::to_string(cases[i].n));
  }
  o.require(t < 1e-3, "runtime");
  o.note("627264, 2944656, 1914762564, 78411025 in " + fmt("%.1f", t * 1e6) + " us");
  return o;
}

Outcome convergence_shape() {
  Outcome o;
  const auto start = Clock::now();
  const std::vector<std::size_t> sizes = {50, 200, 1000, 5000};
  std::vector<std::vector<double>> errors(sizes.size());
  auto config = sampled("water", false, 0.02, 20000);
  config.sqd.n_batches = 10;
  config.sqd.iterations = 3;
  config.sweep_batch_sizes = sizes;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    config.sqd.seed = seed;
    std::ostringstream sink;
    const auto r = app::cmd_sweep(config, sink);
    const double ref = r.report["casci"]["energy_hartree"].get<double>();
    const auto& rows = r.report["sweep"];
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const double e = rows[i]["energy_hartree"].get<double>();
      errors[i].push_back(std::abs(e - ref));
      g_batches.push_back({"sweep", e, ref});
    }
  }
  std::vector<double> median;
  for (auto& e : errors) {
    std::sort(e.begin(), e.end());
    median.push_back(e[e.size() / 2]);
  }
  for (std::size_t i = 1; i < median.size(); ++i)
    o.require(median[i] <= median[i - 1], "median error increases at " + std::to_string(sizes[i]) + " shots");
  o.require(median.back() < 1.6e-3, "median error at the largest shot count");
  const double t = seconds_since(start);
  o.require(t < 600.0, "runtime");
  std::string table;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    table += (i ? ", " : "") + std::to_string(sizes[i]) + ": " + fmt("%.3f", units::to_kcal(median[i]));
  o.note("median |dE| kcal/mol by shots per batch {" + table + "}, " + fmt("%.1f", t) + " s");
  return o;
}

Outcome solvation_free_energy() {
  Outcome o;
  const auto start = Clock::now();
  auto config = sampled("water", true, 0.2, 20000);
  config.sqd.n_batches = 4;
  config.sqd.batch_size = 10000;
  config.sqd.iterations = 2;
  const auto s = testing::prepare(config);
  const auto run = run_sampled(config, s);
  record("gsolv water", run.result, run.reference.energy);
  const double diff = units::to_kcal(std::abs(run.result.gsolv - run.reference.gsolv));
  o.require(covers(run.result, run.reference.d), "water subspace does not cover the space");
  o.require(diff < 0.05, "water G_solv difference");
  o.require(run.result.gsolv < 0.0, "water G_solv sign");
  o.note("water G_solv SQD " + fmt("%.4f", run.result.best().gsolv_kcal()) + " vs CASCI " +
         fmt("%.4f", run.reference.gsolv_kcal()) + " kcal/mol");

  auto meoh = sampled("methanol", true, 0.2, 20000);
  meoh.active.active_orbitals = {7, 8, 9, 10};
  meoh.sqd.n_batches = 4;
  meoh.sqd.batch_size = 2000;
  meoh.sqd.iterations = 2;
  const auto m = testing::prepare(meoh);
  const auto mr = run_sampled(meoh, m);
  record("gsolv methanol", mr.result, mr.reference.energy);
  o.require(mr.reference.gsolv < 0.0 && mr.result.gsolv < 0.0, "methanol G_solv sign");
  o.note("methanol G_solv " + fmt("%.4f", mr.result.best().gsolv_kcal()) + " kcal/mol");
  const double t = seconds_since(start);
  o.require(t < 120.0, "runtime");
  o.note(fmt("%.1f", t) + " s");
  return o;
}

Outcome symmetry_and_closure() {
  Outcome o;
  auto config = sampled("water", false, 0.05, 100000);
  const auto s = testing::prepare(config);
  const auto reference = sqd::casci(s.hamiltonian, nullptr, config.sqd);
  const auto noisy = app::make_samples(config, s, &reference);
  const int na = s.hamiltonian.n_alpha, nb = s.hamiltonian.n_beta;
  const auto occ = sqd::init_occupations(noisy, na, nb);
  const auto rec = sqd::recover(noisy, occ, na, nb, 77);
  std::uint64_t wrong = 0;
  for (const auto& [c, n] : rec.samples.counts())
    if (sampling::popcount(c.alpha) != na || sampling::popcount(c.beta) != nb) wrong += n;
  o.require(noisy.total() == 100000 && rec.samples.total() == noisy.total(), "shot count");
  o.require(wrong == 0, std::to_string(wrong) + " shots with wrong particle numbers");
  std::size_t subspaces = 0;
  for (std::size_t size : {5UL, 40UL, 300UL, 3000UL})
    for (const auto& batch : sqd::draw_batches(rec.samples, 10, size, size)) {
      const auto basis = sqd::build_subspace(batch, s.hamiltonian.n_orb, na, nb);
      ++subspaces;
      o.require(basis.dimension() == basis.size() * basis.size(), "d != |U|^2");
      for (const auto& c : batch) o.require(basis.contains(c), "sampled configuration missing");
      for (const auto& c : basis.determinants())
        if (!basis.contains({c.beta, c.alpha})) o.require(false, "subspace not closed under spin exchange");
    }
  o.note(std::to_string(rec.corrected_shots) + " of 100000 noisy shots repaired, " + std::to_string(subspaces) +
         " subspaces closed");
  return o;
}

Outcome variational_suite() {
  Outcome o;
  // every batch seen so far
  std::size_t violations = 0;
  for (const auto& r : g_batches)
    if (r.batch_energy < r.reference - 1e-9) ++violations;
  o.require(!g_batches.empty(), "no batches recorded");
  o.require(violations == 0, std::to_string(violations) + " batches below the full-space energy");

  // nested subspaces, gas and solvated
  for (bool solvated : {false, true}) {
    const auto config = testing::molecule_config("water", solvated);
    const auto s = testing::prepare(config);
    const double full = sqd::casci(s.hamiltonian, s.solvent_context(), config.sqd).energy;
    const auto strings = sqd::all_strings(6, 4);
    double previous = 1e300;
    for (std::size_t k = 1; k <= strings.size(); ++k) {
      const sqd::SubspaceBasis basis(6, 4, {strings.begin(), strings.begin() + static_cast<long>(k)});
      const double e = sqd::scrf_subspace_solve(s.hamiltonian, basis, s.solvent_context(), config.sqd).energy;
      o.require(e <= previous + 1e-10, std::string(solvated ? "solvated" : "gas") + " nested energy rises at k = " +
                                           std::to_string(k));
      o.require(e >= full - 1e-9, "nested energy below the full-space energy");
      previous = e;
    }
  }

  // explicit matrix against Davidson up to d = 2000
  auto dz = testing::molecule_config("water", false, "cc-pvdz");
  dz.active.active_orbitals = {1, 2, 3, 4, 5, 6, 7, 8};
  const auto s = testing::prepare(dz);
  const auto strings = sqd::all_strings(8, 4);
  double worst = 0.0;
  std::size_t largest = 0;
  for (std::size_t k : {3UL, 12UL, 25UL, 44UL}) {
    std::vector<sampling::Bits> pick;
    for (std::size_t i = 0; i < k; ++i) pick.push_back(strings[(i * 37) % strings.size()]);
    const sqd::SubspaceBasis basis(8, 4, pick);
    const sqd::ExcitationTable table(basis);
    const sqd::ProjectedHamiltonian h(s.hamiltonian, basis, table);
    const auto eig = sqd::davidson_ground_state(h, {1e-9});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(), Eigen::EigenvaluesOnly);
    worst = std::max(worst, std::abs(eig.energy - (es.eigenvalues()(0) + h.constant())));
    largest = std::max(largest, basis.dimension());
  }
  o.require(worst <= 1e-9, "Davidson differs from explicit diagonalization");
  o.note(std::to_string(g_batches.size()) + " batch energies checked, dense vs Davidson max |dE| " + fmt("%.1e", worst) +
         " up to d = " + std::to_string(largest));
  return o;
}

bool same(const sqd::BatchResult& a, const sqd::BatchResult& b) {
  return a.index == b.index && a.energy == b.energy && a.gsolv == b.gsolv && a.ci == b.ci && a.d == b.d &&
         a.n_strings == b.n_strings && a.scrf_iterations == b.scrf_iterations && a.converged == b.converged &&
         a.g_history == b.g_history && a.rdm.alpha == b.rdm.alpha && a.rdm.beta == b.rdm.beta && a.error == b.error;
}

bool same(const sqd::SQDResult& a, const sqd::SQDResult& b) {
  if (a.energy != b.energy || a.gsolv != b.gsolv || a.best_batch != b.best_batch ||
      a.hilbert_dimension != b.hilbert_dimension || a.corrected_shots != b.corrected_shots ||
      a.uniform_fallbacks != b.uniform_fallbacks || a.iterations.size() != b.iterations.size() ||
      a.occupations.size() != b.occupations.size())
    return false;
  for (std::size_t i = 0; i < a.occupations.size(); ++i)
    if (a.occupations[i].up != b.occupations[i].up || a.occupations[i].down != b.occupations[i].down) return false;
  for (std::size_t i = 0; i < a.iterations.size(); ++i) {
    if (a.iterations[i].size() != b.iterations[i].size()) return false;
    for (std::size_t k = 0; k < a.iterations[i].size(); ++k)
      if (!same(a.iterations[i][k], b.iterations[i][k])) return false;
  }
  return true;
}

Outcome determinism() {
  Outcome o;
  for (bool solvated : {false, true}) {
    auto config = sampled("water", solvated, 0.02, 20000);
    config.sqd.n_batches = 8;
    config.sqd.batch_size = 300;
    config.sqd.seed = 2024;
    const auto s = testing::prepare(config);
    const auto ref = sqd::casci(s.hamiltonian, s.solvent_context(), config.sqd);
    const auto samples = app::make_samples(config, s, &ref);
    o.require(samples == app::make_samples(config, s, &ref), "samples differ between calls");
    config.sqd.workers = 1;
    const auto one = sqd::run_sqd(s.hamiltonian, s.solvent_context(), samples, config.sqd);
    record("determinism", one, ref.energy);
    for (int workers : {2, 4, 7}) {
      config.sqd.workers = workers;
      const auto many = sqd::run_sqd(s.hamiltonian, s.solvent_context(), samples, config.sqd);
      o.require(same(one, many), std::string(solvated ? "solvated" : "gas") + " result differs with " +
                                     std::to_string(workers) + " workers");
    }
  }
  o.note("1, 2, 4 and 7 workers bit-identical, gas and solvated");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  // the variational sweep reads batches recorded by the runs before it
  const std::vector<Criterion> criteria = {
      {"Born-ion analytic limit", born_ion},
      {"Gauss law and vacuum limit", gauss_law},
      {"RHF reference energies", rhf_references},
      {"full-coverage equivalence with CASCI", full_coverage},
      {"Hilbert-space dimensions", hilbert_dimensions},
      {"convergence with shots per batch", convergence_shape},
      {"solvation free energy consistency", solvation_free_energy},
      {"particle-number restoration and closure", symmetry_and_closure},
      {"variational bounds and Davidson accuracy", variational_suite},
      {"determinism across worker counts", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << "  " << criteria[i].name << "  (" << o.detail << ")"
              << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
