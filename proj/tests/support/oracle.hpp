#pragma once

#include "solvaq/active/active_space.hpp"
#include "solvaq/sampling/samples.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace solvaq::testing {

/// <I|H|J> over the listed determinants, built by applying every term of
/// sum h_pq a+p aq + 1/2 sum <pq|rs> a+p a+q as ar in the spin-orbital basis.
/// The frozen constant is excluded.
Eigen::MatrixXd spin_orbital_hamiltonian(const active::ActiveHamiltonian& h,
                                         const std::vector<sampling::Configuration>& dets);

/// Lowest eigenvalue of the dense spin-orbital matrix plus e_frozen.
double dense_ground_energy(const active::ActiveHamiltonian& h,
                           const std::vector<sampling::Configuration>& dets);

/// Frozen values from tests/oracles/reference_values.json.
const nlohmann::json& reference();

std::string data_path(const std::string& relative);
std::string temp_path(const std::string& name);

}  // namespace solvaq::testing

#include "solvaq/app/pipeline.hpp"

namespace solvaq::testing {

/// Run configuration for a shipped geometry ("h2", "he", "water", "methanol").
/// Water uses the full-valence active space (O 1s frozen), H2 both orbitals.
app::RunConfig molecule_config(const std::string& name, bool solvated,
                               const std::string& basis = "sto-3g");

/// prepare_scf followed by prepare_active.
app::PreparedSystem prepare(const app::RunConfig& config);

}  // namespace solvaq::testing
