#include "solvaq/sqd/engine.hpp"

#include "solvaq/error.hpp"
#include "solvaq/units.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace solvaq::sqd {

void SQDConfig::validate() const {
  if (n_batches < 1) throw ConfigError("number of batches must be >= 1");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (iterations < 1) throw ConfigError("recovery iterations must be >= 1");
  if (!(davidson_tolerance > 0.0) || !(scrf_tolerance > 0.0))
    throw ConfigError("solver tolerances must be positive");
  if (scrf_max_iterations < 1) throw ConfigError("SCRF iteration limit must be >= 1");
  if (workers < 1) throw ConfigError("worker count must be >= 1");
}

double BatchResult::gsolv_kcal() const { return units::to_kcal(gsolv); }

const BatchResult& SQDResult::best() const {
  if (iterations.empty() || best_batch < 0) throw DomainError("SQD result holds no batches");
  return iterations.back()[static_cast<std::size_t>(best_batch)];
}

BatchResult scrf_subspace_solve(const active::ActiveHamiltonian& gas, const SubspaceBasis& basis,
                                const SolventContext* solvent, const SQDConfig& config,
                                const std::optional<Vector>& guess) {
  const ExcitationTable table(basis);
  DavidsonOptions opts;
  opts.tolerance = config.davidson_tolerance;
  BatchResult res;
  res.d = basis.dimension();
  res.n_strings = basis.size();

  if (!solvent || !solvent->model) {
    const ProjectedHamiltonian h(gas, basis, table);
    auto eig = davidson_ground_state(h, opts, guess);
    res.energy = eig.energy;
    res.ci = std::move(eig.vector);
    res.rdm = one_rdm(res.ci, basis, table);
    res.converged = true;
    res.g_history.push_back(res.energy);
    return res;
  }

  const auto& model = *solvent->model;
  const auto& mos = *solvent->mos;
  auto charges = model.respond(solvent->initial_density);
  std::optional<Vector> start = guess;
  double previous = 0.0;
  for (int it = 1; it <= config.scrf_max_iterations; ++it) {
    const auto op = model.fock(charges);
    const auto solvated = active::add_solvent(gas, mos, op);
    const ProjectedHamiltonian h(solvated, basis, table);
    auto eig = davidson_ground_state(h, opts, start);
    res.rdm = one_rdm(eig.vector, basis, table);
    const Matrix density = active::total_density(mos, res.rdm.total());
    // remove the linear solvent term the eigenvalue contains, add the
    // quadratic polarization energy of the new density
    const double e_gas = eig.energy - op.v.cwiseProduct(density).sum() - op.nuclear_energy;
    charges = model.respond(density);
    const double g = e_gas + charges.polarization_energy;
    res.g_history.push_back(g);
    res.energy = g;
    res.gsolv = charges.polarization_energy;
    res.ci = eig.vector;
    res.scrf_iterations = it;
    start = std::move(eig.vector);
    if (it > 1 && std::abs(g - previous) < config.scrf_tolerance) {
      res.converged = true;
      break;
    }
    previous = g;
  }
  return res;
}

OccupationDistribution update_occupations(const std::vector<BatchResult>& results) {
  OccupationDistribution occ;
  int used = 0;
  for (const auto& r : results) {
    if (!r.converged || !r.error.empty()) continue;
    if (used == 0) {
      occ.up = Vector::Zero(r.rdm.alpha.rows());
      occ.down = Vector::Zero(r.rdm.beta.rows());
    }
    occ.up += r.rdm.alpha.diagonal();
    occ.down += r.rdm.beta.diagonal();
    ++used;
  }
  if (used == 0) throw SolverError("no batch converged; cannot update occupations");
  occ.up /= used;
  occ.down /= used;
  return occ;
}

namespace {

// Runs f(i) for i in [0, n) on up to `workers` threads. Each index writes
// only its own slot, so the outcome is independent of scheduling.
template <class F>
void parallel_for(int n, int workers, F&& f) {
  const int threads = std::min(workers, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) f(i);
    });
}

}  // namespace

SQDResult run_sqd(const active::ActiveHamiltonian& gas, const SolventContext* solvent,
                  const SampleSet& samples, const SQDConfig& config) {
  config.validate();
  if (samples.empty()) throw DomainError("SQD needs a non-empty sample set");
  if (samples.n_orb() != gas.n_orb) throw DomainError("samples and Hamiltonian differ in n_orb");
  const int na = gas.n_alpha, nb = gas.n_beta;

  SQDResult out;
  out.hilbert_dimension = hilbert_dimension(gas.n_orb, na, nb);
  OccupationDistribution occ = init_occupations(samples, na, nb);
  for (int it = 1; it <= config.iterations; ++it) {
    out.occupations.push_back(occ);
    const auto recovered =
        recover(samples, occ, na, nb,
                sampling::derive_seed(config.seed, {sampling::kSeedRecover, static_cast<std::uint64_t>(it)}));
    out.corrected_shots += recovered.corrected_shots;
    out.uniform_fallbacks += recovered.uniform_fallbacks;
    const auto batches = draw_batches(
        recovered.samples, config.n_batches, config.batch_size,
        sampling::derive_seed(config.seed, {sampling::kSeedBatches, static_cast<std::uint64_t>(it)}));

    std::vector<BatchResult> results(batches.size());
    parallel_for(static_cast<int>(batches.size()), config.workers, [&](int b) {
      auto& r = results[static_cast<std::size_t>(b)];
      try {
        const auto basis = build_subspace(batches[static_cast<std::size_t>(b)], gas.n_orb, na, nb);
        r = scrf_subspace_solve(gas, basis, solvent, config);
      } catch (const Error& e) {
        r = BatchResult{};
        r.error = e.what();
      }
      r.index = b;
    });
    out.iterations.push_back(std::move(results));
    if (it < config.iterations) occ = update_occupations(out.iterations.back());
  }

  // lowest energy of the last iteration, first index on ties
  const auto& last = out.iterations.back();
  for (const auto& r : last) {
    if (!r.error.empty()) continue;
    if (out.best_batch < 0 || r.energy < last[static_cast<std::size_t>(out.best_batch)].energy)
      out.best_batch = r.index;
  }
  if (out.best_batch < 0) throw SolverError("every batch of the last iteration failed: " + last.front().error);
  out.energy = out.best().energy;
  out.gsolv = out.best().gsolv;
  return out;
}

BatchResult casci(const active::ActiveHamiltonian& gas, const SolventContext* solvent,
                  const SQDConfig& config) {
  if (gas.n_alpha != gas.n_beta)
    throw ConfigError("only closed-shell targets with n_alpha == n_beta are supported");
  const auto dim = hilbert_dimension(gas.n_orb, gas.n_alpha, gas.n_beta);
  if (dim > kMaxCasciDimension)
    throw CapacityError("CASCI space of " + std::to_string(dim) +
                        " determinants exceeds the limit; use SQD instead");
  return scrf_subspace_solve(gas, SubspaceBasis::full(gas.n_orb, gas.n_alpha), solvent, config);
}

}  // namespace solvaq::sqd
