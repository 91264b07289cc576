#include "oracle.hpp"

#include "solvaq/app/config.hpp"
#include "solvaq/error.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace solvaq;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string output;
};

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "solvaq-cli-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const auto path = dir / "run.ini";
  std::ofstream(path) << body;
  return path;
}

Run run_cli(const std::string& args, const fs::path& dir) {
  const auto log = dir / "log.txt";
  const std::string cmd = std::string(SOLVAQ_EXE) + " " + args + " > " + log.string() + " 2>&1";
  Run r;
  const int raw = std::system(cmd.c_str());
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

nlohmann::json report(const fs::path& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

std::string geometry(const std::string& name) { return std::string(SOLVAQ_DATA_DIR) + "/geometries/" + name + ".xyz"; }

const std::string kH2 = "[molecule]\ngeometry = " + geometry("h2") + "\nunits = bohr\n[active]\norbitals = 0, 1\n";

}  // namespace

TEST_CASE("config loading") {
  const auto dir = scratch("config");
  fs::create_directories(dir / "geo");
  fs::copy_file(geometry("water"), dir / "geo" / "w.xyz");
  const auto path = write_config(dir,
                                 "; comment\n[molecule]\ngeometry = geo/w.xyz\nbasis = STO-3G\n"
                                 "[solvent]\nmodel = iefpcm\npoints = 194\n"
                                 "[active]\nmode = avas\ntargets = O 2p, H 1s\n"
                                 "[sampler]\nshots = 500\nnoise = 0.01\n"
                                 "[run]\nseed = 12\noutput = out\n[sweep]\nbatch_sizes = 10, 20 40\n");
  const auto c = app::load_config(path.string());
  CHECK(c.geometry_path == (dir / "geo" / "w.xyz").lexically_normal().string());
  CHECK(fs::path(c.basis_path).filename() == "sto-3g.basis");
  CHECK(c.solvent.enabled);
  CHECK(c.solvent.points == 194);
  CHECK(c.solvent.dielectric.epsilon == pcm::kWaterPermittivity);
  CHECK(c.active.mode == active::ActiveSpaceSpec::Mode::avas);
  CHECK(c.active.targets == std::vector<std::string>{"O 2p", "H 1s"});
  CHECK(c.sampler.shots == 500);
  CHECK(c.sqd.seed == 12);
  CHECK(c.sqd.batch_size == 1000);
  CHECK(c.output_dir == (dir / "out").string());
  CHECK(c.sweep_batch_sizes == std::vector<std::size_t>{10, 20, 40});
  CHECK_NOTHROW(c.validate());
  CHECK(app::to_json(c)["solvent"]["model"] == "iefpcm");

  auto rejects = [&](const std::string& body) {
    return app::load_config(write_config(dir, body).string());
  };
  CHECK_THROWS_AS(rejects("[molecule]\ngeometry = x.xyz\n[extra]\na = 1\n"), ConfigError);
  CHECK_THROWS_AS(rejects("[molecule]\ngeometry = x.xyz\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(rejects("[molecule]\nunits = bohr\n"), ConfigError);
  CHECK_THROWS_AS(rejects("[molecule]\ngeometry = x.xyz\n[scf]\nmax_iterations = many\n"), ConfigError);
  CHECK_THROWS_AS(rejects("[molecule]\ngeometry = x.xyz\n[solvent]\nmodel = cosmo\n"), ConfigError);
  CHECK_THROWS_AS(rejects("[molecule\ngeometry = x.xyz\n"), ParseError);
  CHECK_THROWS_AS(app::load_config((dir / "missing.ini").string()), ConfigError);
  CHECK_THROWS_AS(rejects("[molecule]\ngeometry = x.xyz\n").validate(), ConfigError);
}

TEST_CASE("scf command") {
  const auto dir = scratch("scf");
  const auto cfg = write_config(dir, kH2);
  const auto r = run_cli("scf --config " + cfg.string() + " --out " + (dir / "out").string(), dir);
  INFO(r.output);
  CHECK(r.status == 0);
  const auto j = report(dir / "out" / "scf.json");
  CHECK(j["command"] == "scf");
  CHECK(j["scf"]["energy_hartree"].get<double>() ==
        doctest::Approx(testing::reference()["h2_rhf"]["energy"].get<double>()).epsilon(1e-8));
  CHECK(j.contains("timing"));
  CHECK(r.output.find("RHF energy") != std::string::npos);
}

TEST_CASE("configuration and I/O errors exit with 2") {
  const auto dir = scratch("errors");
  auto run = [&](const std::string& body) {
    const auto cfg = write_config(dir, body);
    return run_cli("scf --config " + cfg.string() + " --out " + (dir / "out").string(), dir).status;
  };
  CHECK(run(kH2 + "[scf]\nmax_iterations = 10\n[molecule]\n") == 2);
  CHECK(run("[molecule]\ngeometry = " + geometry("h2") + "\nbasis = 6-31g\n") == 2);
  CHECK(run("[molecule]\ngeometry = /nonexistent.xyz\n") == 2);
  CHECK(run(kH2 + "[bogus]\nx = 1\n") == 2);
  CHECK(run("[molecule]\ngeometry = " + geometry("h2") + "\nunits = bohr\ncharge = 1\n") == 2);
  CHECK(run(kH2 + "[solvent]\nmodel = iefpcm\npoints = 100\n") == 2);
  CHECK(run_cli("scf --config " + (dir / "none.ini").string(), dir).status == 2);
}

TEST_CASE("non-convergence exits with 1") {
  const auto dir = scratch("nonconv");
  const auto cfg = write_config(dir, "[molecule]\ngeometry = " + geometry("water") +
                                         "\n[scf]\nmax_iterations = 2\n");
  const auto r = run_cli("scf --config " + cfg.string() + " --out " + (dir / "out").string(), dir);
  CHECK(r.status == 1);
  CHECK(report(dir / "out" / "scf.json")["scf"]["converged"] == false);
}

TEST_CASE("usage errors") {
  const auto dir = scratch("usage");
  CHECK(run_cli("", dir).status != 0);
  CHECK(run_cli("scf", dir).status != 0);
  CHECK(run_cli("scf --config x.ini --workers 0", dir).status != 0);
  const auto help = run_cli("--help", dir);
  CHECK(help.status == 0);
  CHECK(help.output.find("Exit codes") != std::string::npos);
}

TEST_CASE("casci and sqd commands") {
  const auto dir = scratch("sqd");
  const auto cfg = write_config(dir, kH2 +
                                         "[solvent]\nmodel = iefpcm\n[sampler]\nshots = 2000\nnoise = 0.1\n"
                                         "[sqd]\nbatches = 3\nbatch_size = 50\niterations = 2\n[run]\nseed = 4\n");
  const auto out = (dir / "out").string();
  const auto c = run_cli("casci --config " + cfg.string() + " --out " + out, dir);
  INFO(c.output);
  CHECK(c.status == 0);
  const auto casci = report(dir / "out" / "casci.json");
  CHECK(casci["casci"]["energy_hartree"].get<double>() ==
        doctest::Approx(testing::reference()["h2_fci_pcm"]["energy"].get<double>()).epsilon(1e-8));

  const auto a = run_cli("sqd --config " + cfg.string() + " --out " + out + " --workers 1", dir);
  CHECK(a.status == 0);
  const auto ja = report(dir / "out" / "sqd.json");
  const auto b = run_cli("sqd --config " + cfg.string() + " --out " + out + " --workers 3", dir);
  CHECK(b.status == 0);
  const auto jb = report(dir / "out" / "sqd.json");
  CHECK(ja["sqd"] == jb["sqd"]);
  CHECK(ja["sqd"]["energy_hartree"].get<double>() ==
        doctest::Approx(casci["casci"]["energy_hartree"].get<double>()).epsilon(1e-8));
  const auto c2 = run_cli("sqd --config " + cfg.string() + " --out " + out + " --seed 5", dir);
  CHECK(c2.status == 0);
  CHECK(report(dir / "out" / "sqd.json")["seed"] == 5);
}

TEST_CASE("sweep command writes a CSV table") {
  const auto dir = scratch("sweep");
  const auto cfg = write_config(dir, kH2 +
                                         "[sampler]\nshots = 1000\nnoise = 0.05\n"
                                         "[sqd]\nbatches = 2\niterations = 1\n[sweep]\nbatch_sizes = 1, 5, 50\n");
  const auto r = run_cli("sweep --config " + cfg.string() + " --out " + (dir / "out").string(), dir);
  INFO(r.output);
  CHECK(r.status == 0);
  std::ifstream csv(dir / "out" / "sweep.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "shots,d,E_sqd_hartree,E_ref_hartree,dE_kcal,gsolv_kcal");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 3);
  CHECK_FALSE(report(dir / "out" / "sweep.json").contains("csv"));

  const auto one = write_config(dir, kH2 + "[sweep]\nbatch_sizes = 5\n");
  CHECK(run_cli("sweep --config " + one.string() + " --out " + (dir / "out").string(), dir).status == 2);
}

TEST_CASE("samples file input") {
  const auto dir = scratch("file");
  std::ofstream(dir / "shots.txt") << "n_orb=2\n01 01 30\n10 10 10\n11 01 5\n";
  const auto cfg = write_config(dir, kH2 + "[sampler]\nsource = file\npath = shots.txt\n"
                                           "[sqd]\nbatches = 2\nbatch_size = 20\n");
  const auto r = run_cli("sqd --config " + cfg.string() + " --out " + (dir / "out").string(), dir);
  INFO(r.output);
  CHECK(r.status == 0);
  const auto j = report(dir / "out" / "sqd.json");
  CHECK(j["samples"]["shots"] == 45);
  CHECK(j["samples"]["source"] == "file");

  std::ofstream(dir / "wide.txt") << "n_orb=3\n001 001 3\n";
  const auto bad = write_config(dir, kH2 + "[sampler]\nsource = file\npath = wide.txt\n");
  CHECK(run_cli("sqd --config " + bad.string() + " --out " + (dir / "out").string(), dir).status == 2);
  std::ofstream(dir / "broken.txt") << "n_orb=2\n01 01\n";
  const auto broken = write_config(dir, kH2 + "[sampler]\nsource = file\npath = broken.txt\n");
  const auto e = run_cli("sqd --config " + broken.string() + " --out " + (dir / "out").string(), dir);
  CHECK(e.status == 2);
  CHECK(e.output.find("line 2") != std::string::npos);
}
