#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qachaos/linalg.hpp"
#include "qachaos/model.hpp"

namespace qachaos {

enum class RampKind { kForward, kCyclic };

// Where inside [m dt, (m + 1) dt] the Hamiltonian of step m is sampled.
enum class StepSampling { kLeftEdge, kMidpoint };

/// Schedule s(t) = t / T on [0, T]; the cyclic ramp returns as (2T - t) / T.
class RampParams {
 public:
  // T / dt must be an integer and 0 < dt < 1.
  RampParams(RampKind kind, double leg_time, double dt);

  // T = 3 N^2, which gives T = 588 at N = 14.
  static double default_leg_time(int n_sites) { return 3.0 * n_sites * n_sites; }

  RampKind kind() const noexcept { return kind_; }
  double leg_time() const noexcept { return leg_time_; }
  double dt() const noexcept { return dt_; }
  int leg_steps() const noexcept { return leg_steps_; }
  int steps() const noexcept { return kind_ == RampKind::kCyclic ? 2 * leg_steps_ : leg_steps_; }
  double total_time() const noexcept { return dt_ * steps(); }

  // s of step m in [0, steps()), built from integers so repeated values on the
  // two legs compare equal.
  double step_s(int m, StepSampling sampling = StepSampling::kLeftEdge) const;

 private:
  RampKind kind_;
  double leg_time_;
  double dt_;
  int leg_steps_;
};

double schedule_value(double t, const RampParams& params);

// exp(-i dt H), unitary to ~1e-14.
Matrix step_propagator(const Matrix& h, double dt);
Matrix step_propagator(const RealMatrix& h, double dt);

Matrix heisenberg_conjugate(const Matrix& a, const Matrix& u);

// How a cyclic ramp obtains its backward leg.
enum class BackwardLeg {
  // Multiply the revisited step propagators, served from the cache when present.
  kAccumulate,
  // H(s) is real symmetric, so every step propagator is complex symmetric and
  // the backward leg is a transpose of the forward one up to the end factors.
  // Only the final unitary of the backward leg is available.
  kTimeReversal,
};

struct Checkpoint {
  int step;
  double t;
  double s;
  Matrix unitary;  // empty unless EvolveOptions::store_checkpoints
};

using CheckpointObserver = std::function<void(const Checkpoint&, const Matrix& unitary)>;

struct EvolveOptions {
  int checkpoint_stride = 0;           // 0 disables strided checkpoints
  std::vector<int> checkpoint_steps;   // extra step counts (after m steps) to record
  bool store_checkpoints = false;
  CheckpointObserver observer;
  StepSampling sampling = StepSampling::kLeftEdge;
  BackwardLeg backward = BackwardLeg::kAccumulate;
  std::size_t cache_budget_bytes = std::size_t{3} << 29;
};

struct RampResult {
  Matrix unitary;                      // U(T_tot)
  std::optional<Matrix> turnaround;    // U(T) for cyclic ramps
  std::vector<Checkpoint> checkpoints;
  std::size_t eigendecompositions = 0;
  std::size_t cache_hits = 0;
};

/// U <- exp(-i dt H(s_m)) U for m = 0 .. q-1, in the sector when given.
/// A cyclic result is U_BW * U_FW with both legs accumulated from identity.
RampResult evolve_ramp(const HamiltonianSpec& spec, const RampParams& params,
                       std::optional<ParitySector> sector, const EvolveOptions& options = {});

// Ordered product of exp(-i dt H(s)) over `s_values`, first entry applied first.
Matrix evolve_sequence(const ProjectedHamiltonian& model, std::span<const double> s_values,
                       double dt);

/// Matrix-free H(s) = (1 - s) sum_i X_i + s H_P on the full 2^N space.
class HamiltonianAction {
 public:
  explicit HamiltonianAction(const HamiltonianSpec& spec);

  int n_sites() const noexcept { return n_sites_; }
  Eigen::Index dim() const noexcept { return diagonal_.size(); }
  const RealVector& problem_diagonal() const noexcept { return diagonal_; }

  // out = H(s) in, column by column.
  void apply(double s, const Matrix& in, Matrix& out) const;
  // Upper bound on the spectral norm of H(s).
  double norm_bound(double s) const;

 private:
  int n_sites_;
  RealVector diagonal_;
  double diagonal_max_;
};

// states <- exp(-i dt H(s)) states via a Taylor series truncated at 1e-16
// relative size; agrees with step_propagator to rounding.
void exact_step(const HamiltonianAction& h, double s, double dt, Matrix& states);

struct StateEvolution {
  Matrix final_states;
  std::optional<Matrix> turnaround_states;  // states at t = T on a cyclic ramp
};

// Evolves each column of `initial` (full-space states) through the ramp.
StateEvolution evolve_states(const HamiltonianSpec& spec, const RampParams& params,
                             Matrix initial, StepSampling sampling = StepSampling::kLeftEdge);

}  // namespace qachaos
