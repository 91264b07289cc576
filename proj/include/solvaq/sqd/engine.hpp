#pragma once

#include "solvaq/active/active_space.hpp"
#include "solvaq/pcm/pcm.hpp"
#include "solvaq/sqd/hamiltonian.hpp"
#include "solvaq/sqd/subspace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace solvaq::sqd {

inline constexpr std::uint64_t kMaxCasciDimension = 10'000'000;

struct SQDConfig {
  int n_batches = 10;
  std::size_t batch_size = 1000;
  int iterations = 3;
  double davidson_tolerance = 1e-8;
  double scrf_tolerance = 1e-8;
  int scrf_max_iterations = 30;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;
};

/// What the solvent needs to rebuild the active Hamiltonian from a density.
struct SolventContext {
  const pcm::SolventModel* model = nullptr;
  const active::MOSpace* mos = nullptr;
  Matrix initial_density;  // converged RHF-PCM density
};

struct BatchResult {
  int index = 0;
  double energy = 0.0;  // hartree; free energy G when solvated
  double gsolv = 0.0;   // hartree, 1/2 q.phi at the final density
  Vector ci;
  std::size_t d = 0;
  std::size_t n_strings = 0;
  int scrf_iterations = 0;
  bool converged = false;
  std::vector<double> g_history;
  OneRDM rdm;
  std::string error;  // non-empty when the batch failed

  double gsolv_kcal() const;
};

/// Ground state in the subspace, with the continuum relaxed self-consistently
/// when a solvent context is given. Gas phase is a single Davidson solve.
BatchResult scrf_subspace_solve(const active::ActiveHamiltonian& gas, const SubspaceBasis& basis,
                                const SolventContext* solvent, const SQDConfig& config,
                                const std::optional<Vector>& guess = std::nullopt);

/// Mean spin-resolved occupations over the converged batches.
OccupationDistribution update_occupations(const std::vector<BatchResult>& results);

struct SQDResult {
  std::vector<std::vector<BatchResult>> iterations;
  std::vector<OccupationDistribution> occupations;  // the distribution each iteration started from
  double energy = 0.0;
  double gsolv = 0.0;
  int best_batch = -1;
  std::uint64_t hilbert_dimension = 0;
  std::uint64_t corrected_shots = 0;
  std::uint64_t uniform_fallbacks = 0;

  const BatchResult& best() const;
};

SQDResult run_sqd(const active::ActiveHamiltonian& gas, const SolventContext* solvent,
                  const SampleSet& samples, const SQDConfig& config);

/// Full determinant space solve; throws CapacityError above kMaxCasciDimension.
BatchResult casci(const active::ActiveHamiltonian& gas, const SolventContext* solvent,
                  const SQDConfig& config);

}  // namespace solvaq::sqd
