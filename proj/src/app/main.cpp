#include "solvaq/app/config.hpp"
#include "solvaq/app/pipeline.hpp"
#include "solvaq/error.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

constexpr const char* kFooter = R"(Config file sections and defaults:
  [molecule] geometry (xyz path, required), units = angstrom, basis = sto-3g,
             charge = 0, multiplicity = 1
  [scf]      max_iterations = 200, energy_tolerance = 1e-9, diis_tolerance = 1e-7,
             diis_depth = 8, level_shift = 0
  [solvent]  model = none | iefpcm, epsilon = 78.3553, points = 302, radius_scale = 1.2
  [active]   mode = manual | avas, orbitals (MO indices), targets ("O 2p, H 1s"),
             threshold = 0.2, electrons, n_orbitals
  [sampler]  source = exact | file, path, shots = 100000, noise = 0
  [sqd]      batches = 10, batch_size = 1000, iterations = 3,
             davidson_tolerance = 1e-8, scrf_tolerance = 1e-8, scrf_max_iterations = 30
  [run]      seed = 0, workers = 1, output = solvaq-out
  [sweep]    batch_sizes (two or more)
Exit codes: 0 success, 1 numerical non-convergence, 2 configuration or I/O error.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Continuum-solvated sample-based quantum diagonalization"};
  cli.footer(kFooter);
  cli.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"scf", "restricted Hartree-Fock, optionally with IEF-PCM"},
      {"casci", "full active-space CI reference"},
      {"sqd", "sample-based diagonalization with configuration recovery"},
      {"sweep", "SQD over several batch sizes, written as CSV"}};
  for (const auto& [name, help] : commands) {
    auto* sub = cli.add_subcommand(name, help);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--seed", seed, "master seed (overrides [run] seed)");
    sub->add_option("--workers", workers, "parallel batch workers (overrides [run] workers)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory (overrides [run] output)");
  }
  CLI11_PARSE(cli, argc, argv);
  const std::string command = cli.get_subcommands().front()->get_name();

  try {
    auto config = solvaq::app::load_config(config_path);
    if (seed) config.sqd.seed = *seed;
    if (workers) config.sqd.workers = *workers;
    if (!out_dir.empty()) config.output_dir = out_dir;
    config.validate();

    solvaq::app::CommandResult result;
    if (command == "scf") result = solvaq::app::cmd_scf(config, std::cout);
    else if (command == "casci") result = solvaq::app::cmd_casci(config, std::cout);
    else if (command == "sqd") result = solvaq::app::cmd_sqd(config, std::cout);
    else result = solvaq::app::cmd_sweep(config, std::cout);

    std::filesystem::create_directories(config.output_dir);
    const auto dir = std::filesystem::path(config.output_dir);
    if (command == "sweep") {
      std::ofstream csv(dir / "sweep.csv");
      csv << result.report["csv"].get<std::string>();
      result.report.erase("csv");
      if (!csv) throw solvaq::ConfigError("cannot write " + (dir / "sweep.csv").string());
    }
    std::ofstream report(dir / (command + ".json"));
    report << result.report.dump(2) << '\n';
    if (!report) throw solvaq::ConfigError("cannot write " + (dir / (command + ".json")).string());
    std::cout << "report: " << (dir / (command + ".json")).string() << '\n';
    return result.exit_code;
  } catch (const solvaq::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const solvaq::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const solvaq::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const solvaq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
