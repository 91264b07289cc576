#pragma once

#include "solvaq/active/active_space.hpp"
#include "solvaq/chem/geometry.hpp"
#include "solvaq/pcm/pcm.hpp"
#include "solvaq/scf/rhf.hpp"
#include "solvaq/sqd/engine.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace solvaq::app {

struct SolventSettings {
  bool enabled = false;
  pcm::DielectricParams dielectric;
  int points = 302;
  double radius_scale = 1.2;
};

struct SamplerSettings {
  enum class Source { exact, file };
  Source source = Source::exact;
  std::string path;  // samples file when source == file
  std::uint64_t shots = 100000;
  double noise = 0.0;
};

struct RunConfig {
  std::string config_path;
  std::string geometry_path;
  chem::LengthUnit units = chem::LengthUnit::angstrom;
  std::string basis;       // as written in the file
  std::string basis_path;  // resolved
  int charge = 0;
  int multiplicity = 1;
  scf::SCFConfig scf;
  SolventSettings solvent;
  active::ActiveSpaceSpec active;
  SamplerSettings sampler;
  sqd::SQDConfig sqd;
  std::string output_dir = "solvaq-out";
  std::vector<std::size_t> sweep_batch_sizes;

  void validate() const;
};

/// Reads the sectioned key = value file. Relative paths resolve against the
/// directory of the config file; a bare basis name resolves to the shipped
/// basis directory. Unknown sections or keys are rejected.
RunConfig load_config(const std::string& path);

/// Directory holding basis/ and the example inputs.
std::string data_directory();

nlohmann::json to_json(const RunConfig& config);

}  // namespace solvaq::app
