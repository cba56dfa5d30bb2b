#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qachaos/evolution.hpp"
#include "qachaos/model.hpp"
#include "qachaos/scrambling.hpp"

namespace qachaos {

enum class ExperimentKind {
  kSpectrum,
  kGaps,
  kScsSweep,
  kDickeSweep,
  kRampUnitaryMlsr,
  kEigenstates,
  kScramble,
};

enum class EnergyReference { kMixer, kProblem };

std::string to_string(ExperimentKind kind);

/// One experiment over one or more chain lengths. Optional fields resolve to
/// per-experiment defaults in parse_config, so a parsed config is complete.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kSpectrum;
  std::optional<HamiltonianSpec> model;  // fixes the size when present
  std::vector<int> sizes;
  RampKind ramp = RampKind::kForward;
  std::optional<double> leg_time;  // unset: 3 N^2 per size
  double dt = 0.05;
  StepSampling sampling = StepSampling::kLeftEdge;
  BackwardLeg backward = BackwardLeg::kAccumulate;
  int checkpoint_stride = 0;  // 0: q / 100
  std::vector<double> s_grid;
  int phi_points = 21;
  int sector_sign = 1;
  EnergyReference reference = EnergyReference::kMixer;
  InitialOperator op = InitialOperator::kSigmaY;
  int samples_per_leg = 50;
  double bulk_trim = 0.05;
  double onset_band = 0.01;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  int threads = 1;
};

// Throws ConfigError naming the offending field ("$.ramp.dt").
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Sorted-key JSON of the fully resolved config; hashed into run manifests.
std::string canonical_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

HamiltonianSpec model_for(const ExperimentConfig& config, int n_sites);
RampParams ramp_for(const ExperimentConfig& config, int n_sites);

// Throws CapacityError for sizes the experiment cannot handle.
void check_capacity(const ExperimentConfig& config);

struct TaskStatus {
  std::string name;
  std::string status;  // "ok" or "failed"
  std::string detail;
};

struct RunManifest {
  std::string config_hash;
  std::string tool_version;
  double wall_time_seconds = 0.0;
  std::vector<TaskStatus> tasks;
  std::vector<std::string> outputs;  // relative to the run directory

  bool ok() const;
  std::string to_json() const;
};

/// Runs the experiment, writing CSV files and manifest.json into `out_dir`.
RunManifest run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct CostItem {
  int n_sites = 0;
  std::int64_t full_dim = 0;
  std::int64_t sector_dim = 0;
  std::int64_t steps = 0;
  std::int64_t eigendecompositions = 0;
  std::int64_t pauli_projections = 0;  // per sample time
  std::int64_t sample_times = 0;
  double memory_bytes = 0.0;
};

struct CostReport {
  std::vector<CostItem> items;
  std::vector<std::string> warnings;

  std::string to_text() const;
};

CostReport estimate(const ExperimentConfig& config);

/// Checkpointed unitary evolution written as binary matrices plus
/// checkpoints.json (dims, t, s, params hash).
struct EvolveRequest {
  int n_sites = 8;
  RampKind ramp = RampKind::kForward;
  std::optional<double> leg_time;
  double dt = 0.05;
  std::optional<int> sector_sign = 1;  // nullopt: full space
  int checkpoint_stride = 0;           // 0: final unitary only
};

RunManifest run_evolve(const EvolveRequest& request, const std::filesystem::path& out_dir);

std::string tool_version();

}  // namespace qachaos
