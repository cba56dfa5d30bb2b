#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qachaos/errors.hpp"
#include "qachaos/experiment.hpp"
#include "qachaos/io.hpp"

using namespace qachaos;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_path(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qachaos_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config defaults") {
  const ExperimentConfig c = parse_config(R"({"experiment": "spectrum", "sizes": [8]})");
  CHECK(c.experiment == ExperimentKind::kSpectrum);
  CHECK(c.s_grid.size() == 99);
  CHECK(c.s_grid.front() == doctest::Approx(0.01));
  CHECK(c.s_grid.back() == doctest::Approx(0.99));
  CHECK(c.dt == 0.05);
  CHECK(parse_config(R"({"experiment": "eigenstates", "sizes": [8]})").dt == 0.5);
  CHECK(ramp_for(parse_config(R"({"experiment": "scs-sweep", "sizes": [10]})"), 10).leg_time() == 300.0);
}

TEST_CASE("config diagnostics carry field paths") {
  CHECK(error_path(R"({"sizes": [8]})") == "$.experiment");
  CHECK(error_path(R"({"experiment": "spectra", "sizes": [8]})") == "$.experiment");
  CHECK(error_path(R"({"experiment": "spectrum", "sizes": [8, "x"]})") == "$.sizes[1]");
  CHECK(error_path(R"({"experiment": "spectrum", "sizes": [8], "colour": 1})") == "$.colour");
  CHECK(error_path(R"({"experiment": "scs-sweep", "sizes": [8], "ramp": {"dt": 2}})") == "$.ramp.dt");
  CHECK(error_path(R"({"experiment": "scs-sweep", "sizes": [8], "ramp": {"T": 10, "dt": 0.3}})") == "$.ramp.T");
  CHECK(error_path(R"({"experiment": "gaps", "sizes": [8], "s_grid": [0.1, 1.5]})") == "$.s_grid[1]");
  CHECK(error_path(R"({"experiment": "gaps", "sizes": [8], "s_grid": {"start": 0.1}})") == "$.s_grid.stop");
  CHECK(error_path(R"({"experiment": "scramble", "sizes": [4], "operator": "Sq"})") == "$.operator");
  CHECK(error_path(R"({"experiment": "gaps", "model": {"n_sites": 3, "fields": [1, 2]}})") == "$.model.fields");
  CHECK(error_path("{not json") == "$");
}

TEST_CASE("canonical form and hash are stable") {
  const ExperimentConfig c = parse_config(
      R"({"sizes": [6, 8], "experiment": "gaps", "s_grid": {"start": 0.1, "stop": 0.5, "step": 0.1}})");
  const std::string canon = canonical_json(c);
  const ExperimentConfig again = parse_config(canon);
  CHECK(canonical_json(again) == canon);
  CHECK(config_hash(again) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  ExperimentConfig other = c;
  other.sizes = {6};
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("capacity is checked before compute") {
  CHECK_THROWS_AS(check_capacity(parse_config(R"({"experiment": "scramble", "sizes": [8]})")),
                  CapacityError);
  CHECK_THROWS_AS(run(parse_config(R"({"experiment": "spectrum", "sizes": [18]})"), scratch("cap")),
                  CapacityError);
  CHECK_FALSE(fs::exists(scratch("cap")));
}

TEST_CASE("estimates") {
  const CostReport unitary = estimate(parse_config(
      R"({"experiment": "ramp-unitary-mlsr", "sizes": [12, 14], "ramp": {"T": 600}})"));
  REQUIRE(unitary.items.size() == 2);
  CHECK(unitary.items[1].sector_dim == 8256);
  CHECK(unitary.items[0].steps == 1200);
  bool warned = false;
  for (const auto& w : unitary.warnings) warned |= w.find("8256") != std::string::npos;
  CHECK(warned);

  const CostReport scramble = estimate(parse_config(R"({"experiment": "scramble", "sizes": [6]})"));
  CHECK(scramble.items[0].pauli_projections == 4096);
  CHECK(scramble.items[0].steps == 108 * 20);

  const CostReport forward = estimate(parse_config(
      R"({"experiment": "scs-sweep", "sizes": [10], "ramp": {"T": 600, "dt": 0.05}})"));
  CHECK(forward.items[0].steps == 12000);
  CHECK(forward.to_text().find("12000") != std::string::npos);

  // Estimates never refuse.
  const CostReport big = estimate(parse_config(R"({"experiment": "scramble", "sizes": [9]})"));
  CHECK_FALSE(big.warnings.empty());
}

TEST_CASE("spectrum run writes CSV and manifest, deterministically") {
  const ExperimentConfig c = parse_config(
      R"({"experiment": "spectrum", "sizes": [6, 7], "s_grid": [0.2, 0.5], "seed": 3})");
  const fs::path a = scratch("spec_a");
  const fs::path b = scratch("spec_b");
  const RunManifest ma = run(c, a);
  CHECK(ma.ok());
  run(c, b);
  for (const std::string& f : ma.outputs) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const std::string csv = slurp(a / "mlsr_N6.csv");
  CHECK(csv.rfind("s,mlsr,skipped_fraction\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["config_hash"] == config_hash(c));
  CHECK(manifest["config_hash"] == config_hash(parse_config(manifest["config"].dump())));
  CHECK(manifest["outputs"].size() == ma.outputs.size());
  CHECK(manifest["tool_version"] == tool_version());
  std::size_t manifests = 0;
  for (const auto& entry : fs::directory_iterator(a)) manifests += entry.path().filename() == "manifest.json";
  CHECK(manifests == 1);
}

TEST_CASE("every experiment kind runs at small size") {
  const char* configs[] = {
      R"({"experiment": "gaps", "sizes": [6], "s_grid": [0.3, 0.6]})",
      R"({"experiment": "scs-sweep", "sizes": [4], "phi_points": 5, "ramp": {"kind": "cyclic", "T": 5}})",
      R"({"experiment": "dicke-sweep", "sizes": [4], "ramp": {"T": 5}})",
      R"({"experiment": "ramp-unitary-mlsr", "sizes": [8], "ramp": {"kind": "cyclic", "T": 10}})",
      R"({"experiment": "eigenstates", "sizes": [4, 5, 6], "ramp": {"T": 10}})",
      R"({"experiment": "scramble", "sizes": [3], "samples_per_leg": 4, "ramp": {"kind": "cyclic", "T": 2}})",
  };
  int i = 0;
  for (const char* text : configs) {
    CAPTURE(text);
    const fs::path dir = scratch("kind" + std::to_string(i++));
    const RunManifest m = run(parse_config(text), dir);
    for (const auto& t : m.tasks) {
      CAPTURE(t.detail);
      CHECK(t.status == "ok");
    }
    CHECK_FALSE(m.outputs.empty());
    for (const std::string& f : m.outputs) {
      const std::string body = slurp(dir / f);
      CHECK(body.find('\n') != std::string::npos);
      CHECK(std::isalpha(static_cast<unsigned char>(body[0])));
    }
  }
}

TEST_CASE("checkpointed evolve") {
  const fs::path dir = scratch("evolve");
  EvolveRequest req;
  req.n_sites = 4;
  req.leg_time = 4.0;
  req.dt = 0.5;
  req.ramp = RampKind::kCyclic;
  req.checkpoint_stride = 4;
  const RunManifest m = run_evolve(req, dir);
  CHECK(m.outputs.size() == 5);
  const auto sidecar = nlohmann::json::parse(slurp(dir / "checkpoints.json"));
  REQUIRE(sidecar["checkpoints"].size() == 4);
  const auto last = sidecar["checkpoints"][3];
  CHECK(last["step"] == 16);
  CHECK(last["s"].get<double>() == doctest::Approx(0.0));
  const Matrix u = read_matrix_binary(dir / last["file"].get<std::string>());
  CHECK(u.rows() == sidecar["dim"].get<Eigen::Index>());
  CHECK(unitarity_defect(u) < 1e-10);
}
