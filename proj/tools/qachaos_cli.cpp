#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qachaos/errors.hpp"
#include "qachaos/experiment.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;

int finish(const qachaos::RunManifest& manifest, const std::filesystem::path& out) {
  for (const auto& task : manifest.tasks) {
    std::cout << task.status << "  " << task.name;
    if (!task.detail.empty()) std::cout << "  (" << task.detail << ")";
    std::cout << '\n';
  }
  std::cout << manifest.outputs.size() << " files in " << out.string() << ", "
            << manifest.wall_time_seconds << " s\n";
  return manifest.ok() ? 0 : kExitFailure;
}

std::string join_sizes(const std::vector<int>& sizes) {
  std::ostringstream out;
  for (std::size_t i = 0; i < sizes.size(); ++i) out << (i ? "," : "") << sizes[i];
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-diagonalization experiments on annealing ramps of spin chains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qachaos::tool_version());

  std::string config_path;
  std::string out_dir;
  int threads = 0;

  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* estimate_cmd = app.add_subcommand("estimate", "Predict dimensions, step counts and memory");
  estimate_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  std::string ramp = "forward";
  std::optional<double> leg_time;
  std::optional<double> dt;
  int n_sites = 8;
  std::string sector = "+";
  int stride = 0;
  auto* evolve_cmd = app.add_subcommand("evolve", "Write checkpointed ramp unitaries");
  evolve_cmd->add_option("--ramp", ramp)->check(CLI::IsMember({"forward", "cyclic"}));
  evolve_cmd->add_option("--T", leg_time, "Leg time (default 3 N^2)");
  evolve_cmd->add_option("--dt", dt, "Step (default 0.05)");
  evolve_cmd->add_option("--N", n_sites, "Chain length");
  evolve_cmd->add_option("--sector", sector)->check(CLI::IsMember({"+", "-", "full"}));
  evolve_cmd->add_option("--checkpoint-stride", stride, "Steps between checkpoints (0: final only)");
  evolve_cmd->add_option("--out", out_dir, "Output directory")->required();

  std::string reference = "HM";
  std::vector<int> sizes{8, 10, 12};
  auto* eigen_cmd = app.add_subcommand("eigenstates", "Entropy-energy profile of ramp-unitary eigenvectors");
  eigen_cmd->add_option("--ramp", ramp)->check(CLI::IsMember({"forward", "cyclic"}));
  eigen_cmd->add_option("--ref", reference)->check(CLI::IsMember({"HM", "HP"}));
  eigen_cmd->add_option("--sizes", sizes)->delimiter(',');
  eigen_cmd->add_option("--T", leg_time);
  eigen_cmd->add_option("--dt", dt, "Step (default 0.5)");
  eigen_cmd->add_option("--out", out_dir, "Output directory")->required();
  eigen_cmd->add_option("--threads", threads)->check(CLI::PositiveNumber);

  std::string op = "sy_i0";
  auto* scramble_cmd = app.add_subcommand("scramble", "Operator size distribution along a ramp");
  scramble_cmd->add_option("--op", op, "sx_i0, sy_i0, sz_i0, Sx, Sy or Sz");
  scramble_cmd->add_option("--N", n_sites);
  scramble_cmd->add_option("--ramp", ramp)->check(CLI::IsMember({"forward", "cyclic"}));
  scramble_cmd->add_option("--T", leg_time);
  scramble_cmd->add_option("--dt", dt, "Step (default 0.05)");
  scramble_cmd->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd || *estimate_cmd) {
      qachaos::ExperimentConfig config = qachaos::load_config(config_path);
      if (*estimate_cmd) {
        std::cout << qachaos::estimate(config).to_text();
        return 0;
      }
      if (threads > 0) config.threads = threads;
      const std::filesystem::path out = out_dir.empty() ? config.output_dir : out_dir;
      return finish(qachaos::run(config, out), out);
    }

    if (*evolve_cmd) {
      qachaos::EvolveRequest request;
      request.n_sites = n_sites;
      request.ramp = ramp == "cyclic" ? qachaos::RampKind::kCyclic : qachaos::RampKind::kForward;
      request.leg_time = leg_time;
      if (dt) request.dt = *dt;
      request.sector_sign = sector == "full" ? std::nullopt : std::optional<int>(sector == "+" ? 1 : -1);
      request.checkpoint_stride = stride;
      return finish(qachaos::run_evolve(request, out_dir), out_dir);
    }

    // eigenstates and scramble go through the config path so they leave the
    // same manifest as `run`.
    std::ostringstream json;
    json << std::setprecision(17) << "{\"ramp\": {\"kind\": \"" << ramp << "\"";
    if (leg_time) json << ", \"T\": " << *leg_time;
    if (dt) json << ", \"dt\": " << *dt;
    // Only the final unitary is profiled, so the backward leg can be a transpose.
    if (*eigen_cmd) json << ", \"backward\": \"time-reversal\"";
    json << "}, ";
    if (*eigen_cmd) {
      json << "\"experiment\": \"eigenstates\", \"reference\": \"" << reference
           << "\", \"sizes\": [" << join_sizes(sizes) << "]";
    } else {
      json << "\"experiment\": \"scramble\", \"operator\": \"" << op << "\", \"sizes\": ["
           << n_sites << "]";
    }
    json << "}";
    qachaos::ExperimentConfig config = qachaos::parse_config(json.str());
    config.output_dir = out_dir;
    if (threads > 0) config.threads = threads;
    return finish(qachaos::run(config, out_dir), out_dir);
  } catch (const qachaos::ConfigError& e) {
    std::cerr << "config error at " << e.what() << '\n';
    return kExitConfig;
  } catch (const qachaos::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
