#include "solvaq/app/pipeline.hpp"

#include "solvaq/error.hpp"
#include "solvaq/units.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace solvaq::app {

using nlohmann::json;
using units::to_kcal;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

json scf_json(const PreparedSystem& s) {
  json j = {{"energy_hartree", s.scf.energy},
            {"converged", s.scf.converged},
            {"iterations", s.scf.iterations},
            {"diis_error", s.scf.diis_error},
            {"n_ao", s.basis.n_ao()},
            {"n_electrons", s.n_electrons},
            {"orbital_energies", to_vector(s.scf.orbital_energies)},
            {"solvated", s.scf.solvated}};
  if (s.solvent) {
    j["polarization_energy_hartree"] = s.scf.polarization_energy;
    j["polarization_energy_kcal"] = to_kcal(s.scf.polarization_energy);
    j["cavity_tesserae"] = s.solvent->surface().size();
    j["cavity_area_bohr2"] = s.solvent->surface().total_area;
  }
  return j;
}

json active_json(const PreparedSystem& s) {
  const auto& h = s.hamiltonian;
  return {{"n_orbitals", h.n_orb},
          {"n_alpha", h.n_alpha},
          {"n_beta", h.n_beta},
          {"core", s.mos.core},
          {"active", s.mos.active},
          {"e_frozen_hartree", h.e_frozen},
          {"hilbert_dimension", sqd::hilbert_dimension(h.n_orb, h.n_alpha, h.n_beta)}};
}

json header(const RunConfig& config, const std::string& command) {
  return {{"command", command}, {"seed", config.sqd.seed}, {"config", to_json(config)}};
}

std::string summary_line(const std::string& label, double hartree) {
  std::ostringstream out;
  out << std::left << std::setw(28) << label << std::right << std::fixed << std::setprecision(10)
      << std::setw(20) << hartree << " Eh";
  return out.str();
}

std::string kcal_line(const std::string& label, double hartree) {
  std::ostringstream out;
  out << std::left << std::setw(28) << label << std::right << std::fixed << std::setprecision(4)
      << std::setw(20) << to_kcal(hartree) << " kcal/mol";
  return out.str();
}

}  // namespace

PreparedSystem prepare_scf(const RunConfig& config) {
  PreparedSystem s;
  s.geometry = chem::read_xyz(config.geometry_path, config.units);
  const auto library = chem::read_basis_library(config.basis_path);
  s.basis = chem::build_basis(s.geometry, library);
  s.integrals = chem::compute_integrals(s.basis, s.geometry);
  s.n_electrons = s.geometry.total_nuclear_charge() - config.charge;
  if (s.n_electrons <= 0 || s.n_electrons % 2 != 0)
    throw ConfigError("charge " + std::to_string(config.charge) +
                      " leaves an odd or non-positive electron count for a singlet");
  if (config.solvent.enabled) {
    auto cavity = pcm::CavityConfig::bondi();
    cavity.points_per_sphere = config.solvent.points;
    cavity.scale = config.solvent.radius_scale;
    s.solvent = std::make_unique<pcm::SolventModel>(s.geometry, s.basis, config.solvent.dielectric,
                                                    cavity);
  }
  s.scf = scf::run_rhf(s.integrals, s.n_electrons, config.scf, s.solvent.get());
  return s;
}

void prepare_active(PreparedSystem& s, const RunConfig& config) {
  s.mos = active::select_active_space(s.scf, s.basis, s.integrals.overlap, config.active);
  s.hamiltonian = active::transform_integrals(s.integrals, s.mos);
}

sampling::SampleSet make_samples(const RunConfig& config, const PreparedSystem& s,
                                 const sqd::BatchResult* reference) {
  using Source = SamplerSettings::Source;
  sampling::SampleSet clean(s.hamiltonian.n_orb);
  if (config.sampler.source == Source::file) {
    clean = sampling::read_samples(config.sampler.path);
    if (clean.n_orb() != s.hamiltonian.n_orb)
      throw ConfigError("samples file has n_orb=" + std::to_string(clean.n_orb()) +
                        " but the active space has " + std::to_string(s.hamiltonian.n_orb));
  } else {
    if (!reference) throw ConfigError("the exact sampler needs the CASCI reference vector");
    const auto full = sqd::SubspaceBasis::full(s.hamiltonian.n_orb, s.hamiltonian.n_alpha);
    const auto dets = full.determinants();
    clean = sampling::sample_exact(
        s.hamiltonian.n_orb, dets, {reference->ci.data(), static_cast<std::size_t>(reference->ci.size())},
        config.sampler.shots, sampling::derive_seed(config.sqd.seed, {sampling::kSeedSampler}));
  }
  sampling::NoiseModel noise{config.sampler.noise,
                             sampling::derive_seed(config.sqd.seed, {sampling::kSeedNoise})};
  return sampling::apply_noise(clean, noise);
}

json to_json(const sqd::BatchResult& b) {
  json j = {{"batch", b.index},
            {"energy_hartree", b.energy},
            {"gsolv_hartree", b.gsolv},
            {"gsolv_kcal", b.gsolv_kcal()},
            {"d", b.d},
            {"n_strings", b.n_strings},
            {"scrf_iterations", b.scrf_iterations},
            {"converged", b.converged}};
  if (b.scrf_iterations > 0) j["g_history_hartree"] = b.g_history;
  if (!b.error.empty()) j["error"] = b.error;
  return j;
}

json to_json(const sqd::SQDResult& r) {
  json iterations = json::array();
  for (const auto& it : r.iterations) {
    json batches = json::array();
    for (const auto& b : it) batches.push_back(to_json(b));
    iterations.push_back(batches);
  }
  json occupations = json::array();
  for (const auto& o : r.occupations)
    occupations.push_back({{"up", to_vector(o.up)}, {"down", to_vector(o.down)}});
  return {{"energy_hartree", r.energy},
          {"gsolv_hartree", r.gsolv},
          {"gsolv_kcal", to_kcal(r.gsolv)},
          {"best_batch", r.best_batch},
          {"best_d", r.best().d},
          {"hilbert_dimension", r.hilbert_dimension},
          {"corrected_shots", r.corrected_shots},
          {"uniform_fallbacks", r.uniform_fallbacks},
          {"occupations", occupations},
          {"iterations", iterations}};
}

CommandResult cmd_scf(const RunConfig& config, std::ostream& log) {
  const Stopwatch clock;
  const auto s = prepare_scf(config);
  CommandResult out{header(config, "scf"), s.scf.converged ? 0 : 1};
  out.report["scf"] = scf_json(s);
  out.report["timing"] = {{"total_seconds", clock.seconds()}};
  log << summary_line(s.scf.solvated ? "RHF-PCM free energy" : "RHF energy", s.scf.energy) << '\n';
  if (s.solvent) log << kcal_line("polarization energy", s.scf.polarization_energy) << '\n';
  if (!s.scf.converged) log << "SCF did not converge in " << s.scf.iterations << " iterations\n";
  return out;
}

CommandResult cmd_casci(const RunConfig& config, std::ostream& log) {
  const Stopwatch clock;
  auto s = prepare_scf(config);
  CommandResult out{header(config, "casci"), 1};
  out.report["scf"] = scf_json(s);
  if (!s.scf.converged) {
    log << "SCF did not converge; CASCI skipped\n";
    return out;
  }
  prepare_active(s, config);
  out.report["active_space"] = active_json(s);
  const auto ref = sqd::casci(s.hamiltonian, s.solvent_context(), config.sqd);
  out.report["casci"] = to_json(ref);
  out.report["timing"] = {{"total_seconds", clock.seconds()}};
  out.exit_code = ref.converged ? 0 : 1;
  log << summary_line(s.solvent ? "CASCI-PCM free energy" : "CASCI energy", ref.energy) << '\n';
  if (s.solvent) log << kcal_line("G_solv", ref.gsolv) << '\n';
  log << "determinants                " << std::setw(20) << ref.d << '\n';
  if (!ref.converged) log << "solvent macro-iterations did not converge\n";
  return out;
}

namespace {

struct SqdRun {
  PreparedSystem system;
  std::optional<sqd::BatchResult> reference;
  sampling::SampleSet samples;
};

// SCF, active space, optional CASCI reference and samples.
bool setup_sqd(const RunConfig& config, SqdRun& run, CommandResult& out, std::ostream& log) {
  run.system = prepare_scf(config);
  auto& s = run.system;
  out.report["scf"] = scf_json(s);
  if (!s.scf.converged) {
    log << "SCF did not converge; SQD skipped\n";
    out.exit_code = 1;
    return false;
  }
  prepare_active(s, config);
  out.report["active_space"] = active_json(s);
  const auto dim = sqd::hilbert_dimension(s.hamiltonian.n_orb, s.hamiltonian.n_alpha,
                                          s.hamiltonian.n_beta);
  if (dim <= sqd::kMaxCasciDimension) {
    run.reference = sqd::casci(s.hamiltonian, s.solvent_context(), config.sqd);
    out.report["casci"] = to_json(*run.reference);
  }
  run.samples = make_samples(config, s, run.reference ? &*run.reference : nullptr);
  out.report["samples"] = {
      {"source", config.sampler.source == SamplerSettings::Source::file ? "file" : "exact"},
      {"reference_vector", config.sampler.source == SamplerSettings::Source::file ? "none" : "casci"},
      {"shots", run.samples.total()},
      {"unique", run.samples.unique()},
      {"noise", config.sampler.noise}};
  return true;
}

}  // namespace

CommandResult cmd_sqd(const RunConfig& config, std::ostream& log) {
  const Stopwatch clock;
  CommandResult out{header(config, "sqd"), 0};
  SqdRun run;
  if (!setup_sqd(config, run, out, log)) return out;
  const auto& s = run.system;
  const auto result = sqd::run_sqd(s.hamiltonian, s.solvent_context(), run.samples, config.sqd);
  out.report["sqd"] = to_json(result);
  out.report["timing"] = {{"total_seconds", clock.seconds()}};
  if (!result.best().converged) out.exit_code = 1;

  log << summary_line(s.solvent ? "SQD-PCM free energy" : "SQD energy", result.energy) << '\n';
  if (s.solvent) log << kcal_line("G_solv", result.gsolv) << '\n';
  log << "best batch d                " << std::setw(20) << result.best().d << '\n';
  log << "Hilbert dimension D_AS      " << std::setw(20) << result.hilbert_dimension << '\n';
  if (run.reference) {
    log << summary_line("CASCI reference", run.reference->energy) << '\n';
    log << kcal_line("SQD - CASCI", result.energy - run.reference->energy) << '\n';
  }
  return out;
}

CommandResult cmd_sweep(const RunConfig& config, std::ostream& log) {
  if (config.sweep_batch_sizes.size() < 2)
    throw ConfigError("[sweep] batch_sizes needs at least two values");
  const Stopwatch clock;
  CommandResult out{header(config, "sweep"), 0};
  SqdRun run;
  if (!setup_sqd(config, run, out, log)) return out;
  const auto& s = run.system;

  std::ostringstream csv;
  csv << kSweepHeader << '\n' << std::setprecision(17);
  json rows = json::array();
  log << kSweepHeader << '\n';
  for (std::size_t size : config.sweep_batch_sizes) {
    auto cfg = config.sqd;
    cfg.batch_size = size;
    const auto r = sqd::run_sqd(s.hamiltonian, s.solvent_context(), run.samples, cfg);
    if (!r.best().converged) out.exit_code = 1;
    std::ostringstream row;
    row << std::setprecision(17) << size << ',' << r.best().d << ',' << r.energy << ',';
    json entry = {{"shots", size},
                  {"d", r.best().d},
                  {"energy_hartree", r.energy},
                  {"gsolv_kcal", to_kcal(r.gsolv)}};
    if (run.reference) {
      const double de = to_kcal(r.energy - run.reference->energy);
      row << run.reference->energy << ',' << de << ',';
      entry["reference_hartree"] = run.reference->energy;
      entry["dE_kcal"] = de;
    } else {
      row << ",,";
    }
    row << to_kcal(r.gsolv);
    csv << row.str() << '\n';
    log << row.str() << '\n';
    rows.push_back(entry);
  }
  out.report["sweep"] = rows;
  out.report["csv"] = csv.str();
  out.report["timing"] = {{"total_seconds", clock.seconds()}};
  return out;
}

}  // namespace solvaq::app
