#include "solvaq/app/config.hpp"

#include "solvaq/error.hpp"
#include "solvaq/pcm/lebedev.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#ifndef SOLVAQ_DATA_DIR
#define SOLVAQ_DATA_DIR "data"
#endif

namespace solvaq::app {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

std::string data_directory() {
  if (const char* env = std::getenv("SOLVAQ_DATA_DIR"); env && *env) return env;
  return SOLVAQ_DATA_DIR;
}

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"molecule", {"geometry", "units", "basis", "charge", "multiplicity"}},
    {"scf", {"max_iterations", "energy_tolerance", "diis_tolerance", "diis_depth", "level_shift"}},
    {"solvent", {"model", "epsilon", "points", "radius_scale"}},
    {"active", {"mode", "orbitals", "targets", "threshold", "electrons", "n_orbitals"}},
    {"sampler", {"source", "path", "shots", "noise"}},
    {"sqd",
     {"batches", "batch_size", "iterations", "davidson_tolerance", "scrf_tolerance",
      "scrf_max_iterations"}},
    {"run", {"seed", "workers", "output"}},
    {"sweep", {"batch_sizes"}},
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_child_optional(key);
  if (!node) return fallback;
  try {
    return node->get_value<T>();
  } catch (const pt::ptree_bad_data&) {
    throw ConfigError("bad value for " + key + ": '" + node->data() + "'");
  }
}

std::string get_string(const pt::ptree& tree, const std::string& key, const std::string& fallback) {
  return tree.get<std::string>(key, fallback);
}

template <class T>
std::vector<T> get_list(const pt::ptree& tree, const std::string& key) {
  std::string text = tree.get<std::string>(key, "");
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<T> out;
  std::string tok;
  while (in >> tok) {
    std::istringstream one(tok);
    T v{};
    if (!(one >> v) || !one.eof()) throw ConfigError("bad list entry for " + key + ": '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> get_labels(const pt::ptree& tree, const std::string& key) {
  std::vector<std::string> out;
  std::istringstream in(tree.get<std::string>(key, ""));
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

}  // namespace

void RunConfig::validate() const {
  if (multiplicity != 1) throw ConfigError("only singlet (multiplicity = 1) targets are supported");
  if (!fs::exists(geometry_path)) throw ConfigError("geometry file not found: " + geometry_path);
  if (!fs::exists(basis_path)) throw ConfigError("basis file not found: " + basis_path);
  if (sampler.source == SamplerSettings::Source::file && !fs::exists(sampler.path))
    throw ConfigError("samples file not found: " + sampler.path);
  if (sampler.shots < 1) throw ConfigError("sampler shots must be >= 1");
  sampling::NoiseModel{sampler.noise, 0}.validate();
  scf.validate();
  solvent.dielectric.validate();
  if (!pcm::is_supported_grid(solvent.points))
    throw ConfigError("solvent points must be one of 110, 194, 302, 590");
  if (!(solvent.radius_scale > 0.0)) throw ConfigError("radius_scale must be positive");
  sqd.validate();
}

RunConfig load_config(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    if (e.line() == 0) throw ConfigError("cannot read config file " + path);
    throw ParseError(e.message(), static_cast<int>(e.line()));
  }
  for (const auto& [section, body] : tree) {
    const auto it = kSchema.find(section);
    if (!body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
    if (it == kSchema.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  }
  const fs::path base = fs::absolute(fs::path(path)).parent_path();

  RunConfig c;
  c.config_path = fs::absolute(path).lexically_normal().string();
  c.geometry_path = resolve(base, get_string(tree, "molecule.geometry", ""));
  if (c.geometry_path.empty()) throw ConfigError("[molecule] geometry is required");
  const auto units = lower(get_string(tree, "molecule.units", "angstrom"));
  if (units == "angstrom") c.units = chem::LengthUnit::angstrom;
  else if (units == "bohr") c.units = chem::LengthUnit::bohr;
  else throw ConfigError("units must be angstrom or bohr");
  c.basis = get_string(tree, "molecule.basis", "sto-3g");
  const bool is_path = c.basis.find('/') != std::string::npos || c.basis.ends_with(".basis");
  c.basis_path = is_path ? resolve(base, c.basis)
                         : (fs::path(data_directory()) / "basis" / (lower(c.basis) + ".basis")).string();
  c.charge = get(tree, "molecule.charge", 0);
  c.multiplicity = get(tree, "molecule.multiplicity", 1);

  c.scf.max_iterations = get(tree, "scf.max_iterations", c.scf.max_iterations);
  c.scf.energy_tolerance = get(tree, "scf.energy_tolerance", c.scf.energy_tolerance);
  c.scf.diis_tolerance = get(tree, "scf.diis_tolerance", c.scf.diis_tolerance);
  c.scf.diis_depth = get(tree, "scf.diis_depth", c.scf.diis_depth);
  c.scf.level_shift = get(tree, "scf.level_shift", c.scf.level_shift);

  const auto model = lower(get_string(tree, "solvent.model", "none"));
  if (model == "iefpcm" || model == "ief-pcm") c.solvent.enabled = true;
  else if (model != "none") throw ConfigError("solvent model must be none or iefpcm");
  c.solvent.dielectric.epsilon = get(tree, "solvent.epsilon", pcm::kWaterPermittivity);
  c.solvent.points = get(tree, "solvent.points", 302);
  c.solvent.radius_scale = get(tree, "solvent.radius_scale", 1.2);

  const auto mode = lower(get_string(tree, "active.mode", "manual"));
  if (mode == "avas") c.active.mode = active::ActiveSpaceSpec::Mode::avas;
  else if (mode != "manual") throw ConfigError("active mode must be manual or avas");
  c.active.active_orbitals = get_list<int>(tree, "active.orbitals");
  c.active.targets = get_labels(tree, "active.targets");
  c.active.threshold = get(tree, "active.threshold", active::kDefaultAvasThreshold);
  c.active.n_active_electrons = get(tree, "active.electrons", -1);
  c.active.n_active_orbitals = get(tree, "active.n_orbitals", -1);

  const auto source = lower(get_string(tree, "sampler.source", "exact"));
  if (source == "file") c.sampler.source = SamplerSettings::Source::file;
  else if (source != "exact") throw ConfigError("sampler source must be exact or file");
  c.sampler.path = resolve(base, get_string(tree, "sampler.path", ""));
  c.sampler.shots = get<std::uint64_t>(tree, "sampler.shots", c.sampler.shots);
  c.sampler.noise = get(tree, "sampler.noise", 0.0);

  c.sqd.n_batches = get(tree, "sqd.batches", c.sqd.n_batches);
  c.sqd.batch_size = get<std::size_t>(tree, "sqd.batch_size", c.sqd.batch_size);
  c.sqd.iterations = get(tree, "sqd.iterations", c.sqd.iterations);
  c.sqd.davidson_tolerance = get(tree, "sqd.davidson_tolerance", c.sqd.davidson_tolerance);
  c.sqd.scrf_tolerance = get(tree, "sqd.scrf_tolerance", c.sqd.scrf_tolerance);
  c.sqd.scrf_max_iterations = get(tree, "sqd.scrf_max_iterations", c.sqd.scrf_max_iterations);

  c.sqd.seed = get<std::uint64_t>(tree, "run.seed", 0);
  c.sqd.workers = get(tree, "run.workers", 1);
  c.output_dir = resolve(base, get_string(tree, "run.output", "solvaq-out"));
  c.sweep_batch_sizes = get_list<std::size_t>(tree, "sweep.batch_sizes");
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  json j;
  j["molecule"] = {{"geometry", c.geometry_path},
                   {"units", c.units == chem::LengthUnit::angstrom ? "angstrom" : "bohr"},
                   {"basis", c.basis},
                   {"basis_path", c.basis_path},
                   {"charge", c.charge},
                   {"multiplicity", c.multiplicity}};
  j["scf"] = {{"max_iterations", c.scf.max_iterations},
              {"energy_tolerance", c.scf.energy_tolerance},
              {"diis_tolerance", c.scf.diis_tolerance},
              {"diis_depth", c.scf.diis_depth},
              {"level_shift", c.scf.level_shift}};
  j["solvent"] = {{"model", c.solvent.enabled ? "iefpcm" : "none"},
                  {"epsilon", c.solvent.dielectric.epsilon},
                  {"points", c.solvent.points},
                  {"radius_scale", c.solvent.radius_scale}};
  j["active"] = {{"mode", c.active.mode == active::ActiveSpaceSpec::Mode::avas ? "avas" : "manual"},
                 {"orbitals", c.active.active_orbitals},
                 {"targets", c.active.targets},
                 {"threshold", c.active.threshold},
                 {"electrons", c.active.n_active_electrons},
                 {"n_orbitals", c.active.n_active_orbitals}};
  j["sampler"] = {{"source", c.sampler.source == SamplerSettings::Source::file ? "file" : "exact"},
                  {"path", c.sampler.path},
                  {"shots", c.sampler.shots},
                  {"noise", c.sampler.noise}};
  j["sqd"] = {{"batches", c.sqd.n_batches},
              {"batch_size", c.sqd.batch_size},
              {"iterations", c.sqd.iterations},
              {"davidson_tolerance", c.sqd.davidson_tolerance},
              {"scrf_tolerance", c.sqd.scrf_tolerance},
              {"scrf_max_iterations", c.sqd.scrf_max_iterations}};
  j["run"] = {{"seed", c.sqd.seed}, {"workers", c.sqd.workers}, {"output", c.output_dir}};
  j["sweep"] = {{"batch_sizes", c.sweep_batch_sizes}};
  return j;
}

}  // namespace solvaq::app
