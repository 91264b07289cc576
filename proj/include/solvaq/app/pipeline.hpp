#pragma once

#include "solvaq/app/config.hpp"
#include "solvaq/chem/integrals.hpp"

#include <json.hpp>

#include <memory>
#include <ostream>

namespace solvaq::app {

/// Everything up to and including the active-space Hamiltonian.
struct PreparedSystem {
  chem::Geometry geometry;
  chem::AOBasis basis;
  chem::IntegralSet integrals;
  int n_electrons = 0;
  std::unique_ptr<pcm::SolventModel> solvent;
  scf::SCFResult scf;
  active::MOSpace mos;
  active::ActiveHamiltonian hamiltonian;  // gas phase

  /// Points into this object, so it is rebuilt on every call and stays valid
  /// after the system is moved.
  const sqd::SolventContext* solvent_context() const {
    if (!solvent) return nullptr;
    context_ = {solvent.get(), &mos, scf.density};
    return &context_;
  }

 private:
  mutable sqd::SolventContext context_;
};

/// Geometry, basis, integrals and SCF (solvated when configured).
PreparedSystem prepare_scf(const RunConfig& config);
/// Adds the active space and its Hamiltonian to a prepared system.
void prepare_active(PreparedSystem& system, const RunConfig& config);

/// Samples handed to SQD: the samples file, or shots drawn from the CASCI
/// vector followed by the configured bit-flip noise.
sampling::SampleSet make_samples(const RunConfig& config, const PreparedSystem& system,
                                 const sqd::BatchResult* reference);

/// Outcome of one command. exit_code follows the CLI contract:
/// 0 success, 1 numerical non-convergence.
struct CommandResult {
  nlohmann::json report;
  int exit_code = 0;
};

CommandResult cmd_scf(const RunConfig& config, std::ostream& log);
CommandResult cmd_casci(const RunConfig& config, std::ostream& log);
CommandResult cmd_sqd(const RunConfig& config, std::ostream& log);
/// Runs SQD once per configured batch size; report["csv"] holds the table.
CommandResult cmd_sweep(const RunConfig& config, std::ostream& log);

inline constexpr const char* kSweepHeader = "shots,d,E_sqd_hartree,E_ref_hartree,dE_kcal,gsolv_kcal";

nlohmann::json to_json(const sqd::BatchResult& batch);
nlohmann::json to_json(const sqd::SQDResult& result);

}  // namespace solvaq::app
