#include "qachaos/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "json_support.hpp"
#include "qachaos/eigenstates.hpp"
#include "qachaos/errors.hpp"
#include "qachaos/io.hpp"
#include "qachaos/pauli.hpp"
#include "qachaos/random_matrix.hpp"
#include "qachaos/spectral.hpp"
#include "qachaos/states.hpp"

#ifndef QACHAOS_VERSION
#define QACHAOS_VERSION "0.0.0"
#endif

namespace qachaos {

using nlohmann::json;

namespace {

constexpr int kMaxStateSites = 20;
constexpr Eigen::Index kDenseWarnDim = 4096;

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::kSpectrum, "spectrum"},
    {ExperimentKind::kGaps, "gaps"},
    {ExperimentKind::kScsSweep, "scs-sweep"},
    {ExperimentKind::kDickeSweep, "dicke-sweep"},
    {ExperimentKind::kRampUnitaryMlsr, "ramp-unitary-mlsr"},
    {ExperimentKind::kEigenstates, "eigenstates"},
    {ExperimentKind::kScramble, "scramble"},
};

bool unitary_experiment(ExperimentKind kind) {
  return kind == ExperimentKind::kRampUnitaryMlsr || kind == ExperimentKind::kEigenstates;
}

bool ramp_experiment(ExperimentKind kind) {
  return kind != ExperimentKind::kSpectrum && kind != ExperimentKind::kGaps;
}

std::vector<double> default_s_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 99; ++k) grid.push_back(k / 100.0);
  return grid;
}

// Field access with path-tagged errors.
class Reader {
 public:
  Reader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }

  bool has(const std::string& key) const { return object_.contains(key); }
  const json& raw(const std::string& key) const { return object_.at(key); }

  std::string string(const std::string& key) const {
    const json& v = object_.at(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }

  double number(const std::string& key) const {
    const json& v = object_.at(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(at(key), "expected a finite number");
    return x;
  }

  std::int64_t integer(const std::string& key) const {
    const json& v = object_.at(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  void reject_unknown(std::initializer_list<const char*> known) const {
    for (const auto& [key, value] : object_.items()) {
      const bool ok = std::any_of(known.begin(), known.end(),
                                  [&](const char* k) { return key == k; });
      if (!ok) throw ConfigError(at(key), "unknown field");
    }
  }

 private:
  const json& object_;
  std::string path_;
};

std::vector<double> parse_grid(const json& value, const std::string& path) {
  std::vector<double> grid;
  if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      if (!value[i].is_number()) throw ConfigError(p, "expected a number");
      grid.push_back(value[i].get<double>());
    }
  } else if (value.is_object()) {
    Reader r(value, path);
    r.reject_unknown({"start", "stop", "step"});
    for (const char* k : {"start", "stop", "step"}) {
      if (!r.has(k)) throw ConfigError(r.at(k), "missing field");
    }
    const double start = r.number("start");
    const double stop = r.number("stop");
    const double step = r.number("step");
    if (step <= 0.0) throw ConfigError(r.at("step"), "must be positive");
    if (stop < start) throw ConfigError(r.at("stop"), "must not be below start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError(path, "grid too large");
    for (long k = 0; k < count; ++k) grid.push_back(start + static_cast<double>(k) * step);
  } else {
    throw ConfigError(path, "expected an array or {start, stop, step}");
  }
  if (grid.empty()) throw ConfigError(path, "grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
      throw ConfigError(path + "[" + std::to_string(i) + "]", "s must lie in [0, 1]");
    }
  }
  return grid;
}

RampKind parse_ramp_kind(const std::string& text, const std::string& path) {
  if (text == "forward") return RampKind::kForward;
  if (text == "cyclic") return RampKind::kCyclic;
  throw ConfigError(path, "expected \"forward\" or \"cyclic\"");
}

std::string ramp_name(RampKind kind) { return kind == RampKind::kCyclic ? "cyclic" : "forward"; }

std::string reference_name(EnergyReference ref) {
  return ref == EnergyReference::kMixer ? "HM" : "HP";
}

std::string sector_name(int sign) { return sign > 0 ? "+" : "-"; }

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  if (c.model) j["model"] = detail::spec_to_json_value(*c.model);
  j["sizes"] = c.sizes;
  json ramp;
  ramp["kind"] = ramp_name(c.ramp);
  if (c.leg_time) ramp["T"] = *c.leg_time;
  ramp["dt"] = c.dt;
  ramp["sampling"] = c.sampling == StepSampling::kMidpoint ? "midpoint" : "left";
  ramp["backward"] = c.backward == BackwardLeg::kTimeReversal ? "time-reversal" : "accumulate";
  ramp["checkpoint_stride"] = c.checkpoint_stride;
  j["ramp"] = ramp;
  j["s_grid"] = c.s_grid;
  j["phi_points"] = c.phi_points;
  j["sector"] = sector_name(c.sector_sign);
  j["reference"] = reference_name(c.reference);
  j["operator"] = to_string(c.op);
  j["samples_per_leg"] = c.samples_per_leg;
  j["bulk_trim"] = c.bulk_trim;
  j["onset_band"] = c.onset_band;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

std::string size_tag(int n) { return "N" + std::to_string(n); }

class RunContext {
 public:
  RunContext(const ExperimentConfig& config, std::filesystem::path dir)
      : config_(config), dir_(std::move(dir)) {}

  CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
    manifest.outputs.push_back(name);
    return CsvWriter(dir_ / name, header);
  }

  template <typename Fn>
  void task(const std::string& name, Fn&& fn) {
    TaskStatus status{name, "ok", ""};
    try {
      fn();
    } catch (const std::exception& e) {
      status.status = "failed";
      status.detail = e.what();
    }
    manifest.tasks.push_back(std::move(status));
  }

  const ExperimentConfig& config() const { return config_; }
  RunManifest manifest;

 private:
  const ExperimentConfig& config_;
  std::filesystem::path dir_;
};

void run_spectrum(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config();
  for (int n : c.sizes) {
    ctx.task("spectrum " + size_tag(n), [&] {
      const auto points = mlsr_sweep(model_for(c, n), c.s_grid, c.sector_sign, c.bulk_trim, c.threads);
      auto out = ctx.csv("mlsr_" + size_tag(n) + ".csv", {"s", "mlsr", "skipped_fraction"});
      for (const MlsrPoint& p : points) out.row({p.s, p.mlsr, p.skipped_fraction});
    });
  }
  // Seeded GOE and Poisson spectra of matching dimension as reference lines.
  ctx.task("reference ensembles", [&] {
    auto out = ctx.csv("mlsr_reference.csv", {"ensemble", "n_sites", "dim", "mlsr"});
    for (std::size_t i = 0; i < c.sizes.size(); ++i) {
      const int n = c.sizes[i];
      const Eigen::Index dim = parity_sector_dim(n, c.sector_sign);
      const std::uint64_t seed = c.seed + 2 * i;
      const double goe = mlsr_hermitian(sample_goe(dim, seed), c.bulk_trim);
      RealVector levels = sample_poisson_levels(dim, seed + 1);
      std::sort(levels.begin(), levels.end());
      const double poisson =
          hermitian_level_statistics({levels.data(), static_cast<std::size_t>(levels.size())},
                                     c.bulk_trim)
              .mlsr;
      const std::string ns = std::to_string(n);
      const std::string ds = std::to_string(dim);
      out.row(std::vector<std::string>{"GOE", ns, ds, format_number(goe)});
      out.row(std::vector<std::string>{"Poisson", ns, ds, format_number(poisson)});
    }
  });
}

void run_gaps(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config();
  std::vector<std::vector<double>> minima;
  for (int n : c.sizes) {
    ctx.task("gaps " + size_tag(n), [&] {
      const auto points = gap_profile(model_for(c, n), c.s_grid, c.sector_sign, c.threads);
      auto out = ctx.csv("gaps_" + size_tag(n) + ".csv", {"s", "delta0", "delta_avg"});
      double min0 = INFINITY, s0 = 0.0, min_avg = INFINITY, s_avg = 0.0;
      for (const GapPoint& p : points) {
        out.row({p.s, p.ground_gap, p.average_gap});
        if (p.ground_gap < min0) min0 = p.ground_gap, s0 = p.s;
        if (p.average_gap < min_avg) min_avg = p.average_gap, s_avg = p.s;
      }
      minima.push_back({static_cast<double>(n), min0, s0, min_avg, s_avg});
    });
  }
  auto out = ctx.csv("gaps_minima.csv", {"n_sites", "min_delta0", "s_min_delta0", "min_delta_avg",
                                         "s_min_delta_avg"});
  for (const auto& row : minima) out.row(row);
}

void run_scs(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config();
  std::vector<double> phis;
  for (int k = 0; k < c.phi_points; ++k) {
    phis.push_back(c.phi_points == 1 ? 0.0 : std::numbers::pi * k / (c.phi_points - 1));
  }
  for (int n : c.sizes) {
    ctx.task("scs-sweep " + size_tag(n), [&] {
      const auto records = scs_sweep(model_for(c, n), ramp_for(c, n), phis, c.threads);
      const bool cyclic = c.ramp == RampKind::kCyclic;
      std::vector<std::string> header{"phi", "energy_density", "entropy_final"};
      if (cyclic) header.push_back("fidelity");
      auto out = ctx.csv("scs_" + ramp_name(c.ramp) + "_" + size_tag(n) + ".csv", header);
      for (const EntropyRecord& r : records) {
        std::vector<double> row{r.phi, r.energy_density, r.entropy_final};
        if (cyclic) row.push_back(r.fidelity.value_or(NAN));
        out.row(row);
      }
    });
  }
}

void run_dicke(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config();
  for (int n : c.sizes) {
    ctx.task("dicke-sweep " + size_tag(n), [&] {
      // One cyclic run gives S_A(T) at the turnaround and S_A(2T), f(2T) at the end.
      const RampParams cyclic(RampKind::kCyclic, ramp_for(c, n).leg_time(), c.dt);
      const auto records = dicke_sweep(model_for(c, n), cyclic, c.threads);
      auto out = ctx.csv("dicke_" + size_tag(n) + ".csv",
                         {"k", "energy_density", "entropy_forward", "entropy_cyclic",
                          "fidelity_cyclic"});
      for (const EntropyRecord& r : records) {
        out.row({r.phi, r.energy_density, r.entropy_turnaround.value_or(NAN), r.entropy_final,
                 r.fidelity.value_or(NAN)});
      }
    });
  }
}

void run_unitary_mlsr(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config();
  std::vector<std::vector<std::string>> onsets;
  for (int n : c.sizes) {
    ctx.task("ramp-unitary-mlsr " + size_tag(n), [&] {
      const HamiltonianSpec spec = model_for(c, n);
      const RampParams params = ramp_for(c, n);
      const int stride = c.checkpoint_stride > 0 ? c.checkpoint_stride
                                                 : std::max(1, params.steps() / 100);
      std::vector<OnsetPoint> trace;
      EvolveOptions options;
      options.checkpoint_stride = stride;
      options.sampling = c.sampling;
      options.backward = BackwardLeg::kAccumulate;
      options.observer = [&](const Checkpoint& cp, const Matrix& u) {
        double r = NAN;
        try {
          r = mlsr_unitary(u);
        } catch (const EmptyStatisticsError&) {
        }
        trace.push_back({cp.step, cp.t, cp.s, r});
      };
      evolve_ramp(spec, params, parity_sector(spec, c.sector_sign), options);

      auto out = ctx.csv("unitary_mlsr_" + size_tag(n) + ".csv", {"t", "s", "mlsr"});
      for (const OnsetPoint& p : trace) out.row({p.t, p.s, p.mlsr});

      // Onset is defined on the forward leg only.
      std::vector<OnsetPoint> forward;
      for (const OnsetPoint& p : trace) {
        if (p.step <= params.leg_steps()) forward.push_back(p);
      }
      OnsetOptions onset;
      onset.band = c.onset_band;
      const OnsetResult result = detect_onset(std::move(forward), onset);
      onsets.push_back({std::to_string(n), result.found ? "1" : "0",
                        result.found ? format_number(result.t_star) : "nan",
                        result.found ? format_number(result.s_star) : "nan"});
    });
  }
  auto out = ctx.csv("onset.csv", {"n_sites", "found", "t_star", "s_star"});
  for (const auto& row : onsets) out.row(row);
}

void run_eigenstates(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config();
  std::vector<EigenProfile> profiles;
  const std::string tag = ramp_name(c.ramp) + "_" + reference_name(c.reference);
  for (int n : c.sizes) {
    ctx.task("eigenstates " + size_tag(n), [&] {
      const HamiltonianSpec spec = model_for(c, n);
      const ParitySector sector = parity_sector(spec, c.sector_sign);
      EvolveOptions options;
      options.sampling = c.sampling;
      options.backward = c.backward;
      const RampResult ramp = evolve_ramp(spec, ramp_for(c, n), sector, options);
      const RealMatrix h_ref = c.reference == EnergyReference::kMixer
                                   ? restrict(mixer_hamiltonian(spec), sector)
                                   : restrict(problem_hamiltonian(spec), sector);
      EigenProfile profile = eigenprofile(ramp.unitary, h_ref, sector);
      auto out = ctx.csv("eigenprofile_" + tag + "_" + size_tag(n) + ".csv",
                         {"eigenphase", "mean_energy", "entropy", "energy_density", "degenerate"});
      for (const EigenRecord& r : profile.records) {
        out.row({r.phase, r.mean_energy, r.entropy, r.energy_density, r.degenerate ? 1.0 : 0.0});
      }
      profiles.push_back(std::move(profile));
    });
  }
  if (profiles.size() >= 3) {
    ctx.task("scaling fit", [&] {
      const ScalingFit fit = scaling_regression(profiles);
      auto out = ctx.csv("eigenfit_" + tag + ".csv",
                         {"E_d", "a", "b", "n_points", "bin_width", "residual_rms"});
      for (const ScalingBin& b : fit.bins) {
        out.row({b.center, b.slope, b.intercept, static_cast<double>(b.n_points), b.width,
                 b.residual_rms});
      }
    });
  }
}

void run_scramble(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config();
  const std::string op = to_string(c.op);
  for (int n : c.sizes) {
    ctx.task("scramble " + size_tag(n), [&] {
      const RampParams params = ramp_for(c, n);
      const auto trace = mean_size_trace(model_for(c, n), params, c.op, c.samples_per_leg);
      const std::string suffix = op + "_" + ramp_name(c.ramp) + "_" + size_tag(n) + ".csv";
      auto dist = ctx.csv("osd_" + suffix, {"t_over_T", "k", "P_k"});
      auto mean = ctx.csv("mu_" + suffix, {"t_over_T", "mu_over_N"});
      for (const SizeDistribution& d : trace) {
        const double tau = d.time / params.leg_time();
        for (std::size_t k = 0; k < d.probabilities.size(); ++k) {
          dist.row({tau, static_cast<double>(k), d.probabilities[k]});
        }
        mean.row({tau, d.mean / n});
      }
    });
  }
}

std::string manifest_text(const RunManifest& m, const json& config) {
  json j = json::parse(m.to_json());
  j["config"] = config;
  return j.dump(2) + "\n";
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const KindName& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

std::string tool_version() { return QACHAOS_VERSION; }

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  Reader r(root, "$");
  r.reject_unknown({"experiment", "model", "sizes", "ramp", "s_grid", "phi_points", "sector",
                    "reference", "operator", "samples_per_leg", "bulk_trim", "onset_band", "seed",
                    "output_dir", "threads"});

  ExperimentConfig c;
  if (!r.has("experiment")) throw ConfigError("$.experiment", "missing field");
  {
    const std::string name = r.string("experiment");
    const auto it = std::find_if(std::begin(kKindNames), std::end(kKindNames),
                                 [&](const KindName& k) { return name == k.name; });
    if (it == std::end(kKindNames)) throw ConfigError("$.experiment", "unknown experiment " + name);
    c.experiment = it->kind;
  }
  c.dt = unitary_experiment(c.experiment) ? 0.5 : 0.05;
  c.s_grid = default_s_grid();

  if (r.has("model")) c.model = detail::spec_from_json_value(r.raw("model"), "$.model");

  if (r.has("sizes")) {
    const json& v = r.raw("sizes");
    if (!v.is_array() || v.empty()) throw ConfigError("$.sizes", "expected a non-empty array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = "$.sizes[" + std::to_string(i) + "]";
      if (!v[i].is_number_integer()) throw ConfigError(p, "expected an integer");
      const auto n = v[i].get<std::int64_t>();
      if (n < 2 || n > 64) throw ConfigError(p, "chain length must lie in [2, 64]");
      c.sizes.push_back(static_cast<int>(n));
    }
  }
  if (c.model) {
    if (c.sizes.empty()) c.sizes.push_back(c.model->n_sites());
    if (c.sizes.size() != 1 || c.sizes[0] != c.model->n_sites()) {
      throw ConfigError("$.sizes", "an explicit model fixes a single size equal to its n_sites");
    }
  }
  if (c.sizes.empty()) throw ConfigError("$.sizes", "missing field");

  if (r.has("ramp")) {
    Reader ramp(r.raw("ramp"), "$.ramp");
    ramp.reject_unknown({"kind", "T", "dt", "sampling", "backward", "checkpoint_stride"});
    if (ramp.has("kind")) c.ramp = parse_ramp_kind(ramp.string("kind"), ramp.at("kind"));
    if (ramp.has("T")) {
      c.leg_time = ramp.number("T");
      if (*c.leg_time <= 0.0) throw ConfigError(ramp.at("T"), "must be positive");
    }
    if (ramp.has("dt")) {
      c.dt = ramp.number("dt");
      if (!(c.dt > 0.0 && c.dt < 1.0)) throw ConfigError(ramp.at("dt"), "must lie in (0, 1)");
    }
    if (ramp.has("sampling")) {
      const std::string s = ramp.string("sampling");
      if (s == "left") c.sampling = StepSampling::kLeftEdge;
      else if (s == "midpoint") c.sampling = StepSampling::kMidpoint;
      else throw ConfigError(ramp.at("sampling"), "expected \"left\" or \"midpoint\"");
    }
    if (ramp.has("backward")) {
      const std::string s = ramp.string("backward");
      if (s == "accumulate") c.backward = BackwardLeg::kAccumulate;
      else if (s == "time-reversal") c.backward = BackwardLeg::kTimeReversal;
      else throw ConfigError(ramp.at("backward"), "expected \"accumulate\" or \"time-reversal\"");
    }
    if (ramp.has("checkpoint_stride")) {
      const auto stride = ramp.integer("checkpoint_stride");
      if (stride < 0) throw ConfigError(ramp.at("checkpoint_stride"), "must be non-negative");
      c.checkpoint_stride = static_cast<int>(stride);
    }
  }
  if (r.has("s_grid")) c.s_grid = parse_grid(r.raw("s_grid"), "$.s_grid");
  if (r.has("phi_points")) {
    const auto v = r.integer("phi_points");
    if (v < 1 || v > 100000) throw ConfigError("$.phi_points", "must lie in [1, 100000]");
    c.phi_points = static_cast<int>(v);
  }
  if (r.has("sector")) {
    const std::string s = r.string("sector");
    if (s == "+") c.sector_sign = 1;
    else if (s == "-") c.sector_sign = -1;
    else throw ConfigError("$.sector", "expected \"+\" or \"-\"");
  }
  if (r.has("reference")) {
    const std::string s = r.string("reference");
    if (s == "HM") c.reference = EnergyReference::kMixer;
    else if (s == "HP") c.reference = EnergyReference::kProblem;
    else throw ConfigError("$.reference", "expected \"HM\" or \"HP\"");
  }
  if (r.has("operator")) {
    try {
      c.op = parse_initial_operator(r.string("operator"));
    } catch (const DomainError& e) {
      throw ConfigError("$.operator", e.what());
    }
  }
  if (r.has("samples_per_leg")) {
    const auto v = r.integer("samples_per_leg");
    if (v < 1) throw ConfigError("$.samples_per_leg", "must be positive");
    c.samples_per_leg = static_cast<int>(v);
  }
  if (r.has("bulk_trim")) {
    c.bulk_trim = r.number("bulk_trim");
    if (!(c.bulk_trim >= 0.0 && c.bulk_trim < 0.5)) throw ConfigError("$.bulk_trim", "must lie in [0, 0.5)");
  }
  if (r.has("onset_band")) {
    c.onset_band = r.number("onset_band");
    if (!(c.onset_band > 0.0)) throw ConfigError("$.onset_band", "must be positive");
  }
  if (r.has("seed")) {
    const json& v = r.raw("seed");
    if (!v.is_number_unsigned()) throw ConfigError("$.seed", "expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  if (r.has("output_dir")) c.output_dir = r.string("output_dir");
  if (r.has("threads")) {
    const auto v = r.integer("threads");
    if (v < 1) throw ConfigError("$.threads", "must be positive");
    c.threads = static_cast<int>(v);
  }

  // Ramp parameters must be constructible for every size.
  if (ramp_experiment(c.experiment)) {
    for (int n : c.sizes) {
      try {
        ramp_for(c, n);
      } catch (const DomainError& e) {
        throw ConfigError(c.leg_time ? "$.ramp.T" : "$.ramp.dt", e.what());
      }
    }
  }
  for (int n : c.sizes) {
    if (c.sector_sign < 0 && n < 2) throw ConfigError("$.sector", "odd sector needs N >= 2");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string canonical_json(const ExperimentConfig& config) { return config_to_json(config).dump(); }

std::string config_hash(const ExperimentConfig& config) {
  return hex64(fnv1a64(canonical_json(config)));
}

HamiltonianSpec model_for(const ExperimentConfig& config, int n_sites) {
  if (config.model && config.model->n_sites() == n_sites) return *config.model;
  return HamiltonianSpec::nearest_neighbor(n_sites);
}

RampParams ramp_for(const ExperimentConfig& config, int n_sites) {
  const double leg = config.leg_time.value_or(RampParams::default_leg_time(n_sites));
  return RampParams(config.ramp, leg, config.dt);
}

void check_capacity(const ExperimentConfig& config) {
  for (int n : config.sizes) {
    const std::string where = "N = " + std::to_string(n);
    switch (config.experiment) {
      case ExperimentKind::kScramble:
        if (n > kMaxPauliSites) {
          throw CapacityError(where + " exceeds the operator-size limit of " +
                              std::to_string(kMaxPauliSites) + " sites");
        }
        break;
      case ExperimentKind::kScsSweep:
      case ExperimentKind::kDickeSweep:
        if (n > kMaxStateSites) {
          throw CapacityError(where + " exceeds the state-evolution limit of " +
                              std::to_string(kMaxStateSites) + " sites");
        }
        break;
      default:
        if (n > kMaxDenseSites) {
          throw CapacityError(where + " exceeds the dense limit of " +
                              std::to_string(kMaxDenseSites) + " sites");
        }
        break;
    }
  }
}

bool RunManifest::ok() const {
  return std::all_of(tasks.begin(), tasks.end(),
                     [](const TaskStatus& t) { return t.status == "ok"; });
}

std::string RunManifest::to_json() const {
  json j;
  j["config_hash"] = config_hash;
  j["tool_version"] = tool_version;
  j["wall_time_seconds"] = wall_time_seconds;
  j["tasks"] = json::array();
  for (const TaskStatus& t : tasks) {
    j["tasks"].push_back({{"name", t.name}, {"status", t.status}, {"detail", t.detail}});
  }
  j["outputs"] = outputs;
  return j.dump(2);
}

RunManifest run(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  check_capacity(config);
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);

  RunContext ctx(config, out_dir);
  ctx.manifest.config_hash = config_hash(config);
  ctx.manifest.tool_version = tool_version();
  switch (config.experiment) {
    case ExperimentKind::kSpectrum: run_spectrum(ctx); break;
    case ExperimentKind::kGaps: run_gaps(ctx); break;
    case ExperimentKind::kScsSweep: run_scs(ctx); break;
    case ExperimentKind::kDickeSweep: run_dicke(ctx); break;
    case ExperimentKind::kRampUnitaryMlsr: run_unitary_mlsr(ctx); break;
    case ExperimentKind::kEigenstates: run_eigenstates(ctx); break;
    case ExperimentKind::kScramble: run_scramble(ctx); break;
  }
  ctx.manifest.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream(out_dir / "manifest.json") << manifest_text(ctx.manifest, config_to_json(config));
  return ctx.manifest;
}

std::string CostReport::to_text() const {
  std::ostringstream out;
  out << "N\tdim\tsector_dim\tsteps\teigendecompositions\tpauli_projections_per_sample"
         "\tsample_times\tmemory_MiB\n";
  for (const CostItem& i : items) {
    out << i.n_sites << '\t' << i.full_dim << '\t' << i.sector_dim << '\t' << i.steps << '\t'
        << i.eigendecompositions << '\t' << i.pauli_projections << '\t' << i.sample_times << '\t'
        << format_number(std::round(i.memory_bytes / (1 << 20) * 10.0) / 10.0) << '\n';
  }
  for (const std::string& w : warnings) out << "warning: " << w << '\n';
  return out.str();
}

CostReport estimate(const ExperimentConfig& config) {
  CostReport report;
  const auto grid = static_cast<std::int64_t>(config.s_grid.size());
  for (int n : config.sizes) {
    CostItem item;
    item.n_sites = n;
    item.full_dim = n < 63 ? std::int64_t{1} << n : -1;
    item.sector_dim = n <= 40 ? parity_sector_dim(n, config.sector_sign) : -1;
    const double d_sector = static_cast<double>(item.sector_dim);
    const double d_full = static_cast<double>(item.full_dim);
    constexpr double kComplex = 16.0;
    constexpr double kReal = 8.0;

    if (ramp_experiment(config.experiment)) {
      try {
        const RampParams params = ramp_for(config, n);
        item.steps = params.steps();
      } catch (const DomainError& e) {
        report.warnings.push_back("N = " + std::to_string(n) + ": " + e.what());
      }
    }
    const std::int64_t leg = config.ramp == RampKind::kCyclic ? item.steps / 2 : item.steps;
    switch (config.experiment) {
      case ExperimentKind::kSpectrum:
      case ExperimentKind::kGaps:
        item.eigendecompositions = grid;
        item.memory_bytes = 3.0 * kReal * d_sector * d_sector * config.threads;
        break;
      case ExperimentKind::kScsSweep:
      case ExperimentKind::kDickeSweep: {
        const double columns = config.experiment == ExperimentKind::kScsSweep
                                   ? config.phi_points
                                   : n + 1.0;
        item.memory_bytes = 6.0 * kComplex * d_full * columns;
        break;
      }
      case ExperimentKind::kRampUnitaryMlsr:
      case ExperimentKind::kEigenstates: {
        const bool reversal = config.experiment == ExperimentKind::kEigenstates &&
                              config.backward == BackwardLeg::kTimeReversal;
        // Forward leg steps, plus cache misses on the backward leg.
        item.eigendecompositions = leg + (config.ramp == RampKind::kCyclic && !reversal ? 1 : 0);
        if (config.experiment == ExperimentKind::kRampUnitaryMlsr) {
          const int stride = config.checkpoint_stride > 0
                                 ? config.checkpoint_stride
                                 : std::max<std::int64_t>(1, item.steps / 100);
          item.eigendecompositions += item.steps / std::max(stride, 1);
        } else {
          item.eigendecompositions += 1;
        }
        const double cache =
            config.ramp == RampKind::kCyclic && !reversal
                ? std::min(static_cast<double>(leg) * kComplex * d_sector * d_sector,
                           static_cast<double>(EvolveOptions{}.cache_budget_bytes))
                : 0.0;
        item.memory_bytes = 8.0 * kComplex * d_sector * d_sector + cache;
        break;
      }
      case ExperimentKind::kScramble: {
        item.eigendecompositions = leg + (config.ramp == RampKind::kCyclic ? 1 : 0);
        item.sample_times = 1 + config.samples_per_leg * (config.ramp == RampKind::kCyclic ? 2 : 1);
        item.pauli_projections = n <= 31 ? std::int64_t{1} << (2 * n) : -1;
        item.memory_bytes = 10.0 * kComplex * d_full * d_full;
        break;
      }
    }
    const bool dense = config.experiment != ExperimentKind::kScsSweep &&
                       config.experiment != ExperimentKind::kDickeSweep;
    if (dense && item.sector_dim > kDenseWarnDim && config.experiment != ExperimentKind::kScramble) {
      report.warnings.push_back("N = " + std::to_string(n) + ": dense dim " +
                                std::to_string(item.sector_dim) + " in " +
                                sector_name(config.sector_sign) + " sector");
    }
    try {
      ExperimentConfig single;
      single.experiment = config.experiment;
      single.sizes = {n};
      check_capacity(single);
    } catch (const CapacityError& e) {
      report.warnings.push_back(e.what());
    }
    report.items.push_back(item);
  }
  return report;
}

RunManifest run_evolve(const EvolveRequest& request, const std::filesystem::path& out_dir) {
  if (request.n_sites < 2 || request.n_sites > kMaxDenseSites) {
    throw CapacityError("N = " + std::to_string(request.n_sites) + " outside the dense range [2, " +
                        std::to_string(kMaxDenseSites) + "]");
  }
  if (request.checkpoint_stride < 0) throw ConfigError("--checkpoint-stride", "must be non-negative");
  const auto start = std::chrono::steady_clock::now();
  const HamiltonianSpec spec = HamiltonianSpec::nearest_neighbor(request.n_sites);
  const double leg = request.leg_time.value_or(RampParams::default_leg_time(request.n_sites));
  std::optional<RampParams> built;
  try {
    built.emplace(request.ramp, leg, request.dt);
  } catch (const DomainError& e) {
    throw ConfigError("--dt", e.what());
  }
  const RampParams& params = *built;

  json params_json;
  params_json["n_sites"] = request.n_sites;
  params_json["ramp"] = ramp_name(request.ramp);
  params_json["T"] = leg;
  params_json["dt"] = request.dt;
  params_json["sector"] = request.sector_sign ? sector_name(*request.sector_sign) : "full";
  params_json["checkpoint_stride"] = request.checkpoint_stride;
  const std::string hash = hex64(fnv1a64(params_json.dump()));

  std::optional<ParitySector> sector;
  if (request.sector_sign) sector = parity_sector(spec, *request.sector_sign);

  std::filesystem::create_directories(out_dir);
  RunManifest manifest;
  manifest.config_hash = hash;
  manifest.tool_version = tool_version();
  json entries = json::array();
  auto record = [&](int step, double t, double s, const Matrix& u) {
    const std::string name = "U_step" + std::to_string(step) + ".bin";
    write_matrix_binary(out_dir / name, u);
    manifest.outputs.push_back(name);
    entries.push_back({{"file", name}, {"step", step}, {"t", t}, {"s", s},
                       {"rows", u.rows()}, {"cols", u.cols()}});
  };

  EvolveOptions options;
  options.checkpoint_stride = request.checkpoint_stride;
  options.observer = [&](const Checkpoint& cp, const Matrix& u) { record(cp.step, cp.t, cp.s, u); };
  const RampResult result = evolve_ramp(spec, params, sector, options);
  if (entries.empty() || entries.back()["step"].get<int>() != params.steps()) {
    record(params.steps(), params.total_time(), schedule_value(params.total_time(), params),
           result.unitary);
  }
  manifest.tasks.push_back({"evolve", "ok", ""});

  json sidecar;
  sidecar["params"] = params_json;
  sidecar["params_hash"] = hash;
  sidecar["dim"] = result.unitary.rows();
  sidecar["steps"] = params.steps();
  sidecar["format"] = "QAMX v1: magic, uint32 version, uint64 rows, uint64 cols, complex128 column-major";
  sidecar["checkpoints"] = entries;
  std::ofstream(out_dir / "checkpoints.json") << sidecar.dump(2) << "\n";
  manifest.outputs.push_back("checkpoints.json");

  manifest.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream(out_dir / "manifest.json") << manifest_text(manifest, params_json);
  return manifest;
}

}  // namespace qachaos
