#include "qachaos/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "qachaos/errors.hpp"
#include "qachaos/pauli.hpp"

namespace qachaos {
namespace {

// exp(-i dt H) = V (cos - i sin) V^T for real symmetric H.
struct StepFactor {
  RealMatrix vectors;
  RealVector cos;
  RealVector sin;

  std::size_t bytes() const {
    return sizeof(double) * static_cast<std::size_t>(vectors.size() + 2 * cos.size());
  }
};

StepFactor make_factor(const RealMatrix& h, double dt) {
  SymmetricEigen eig = symmetric_eigen(h, true);
  StepFactor f{std::move(eig.vectors), RealVector(eig.values.size()), RealVector(eig.values.size())};
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    f.cos(i) = std::cos(dt * eig.values(i));
    f.sin(i) = std::sin(dt * eig.values(i));
  }
  return f;
}

// Complex matrix held as separate real and imaginary parts so that the
// propagator multiplies with real gemm.
struct SplitMatrix {
  RealMatrix re;
  RealMatrix im;

  static SplitMatrix identity(Eigen::Index n) {
    return {RealMatrix::Identity(n, n), RealMatrix::Zero(n, n)};
  }

  Matrix to_complex() const {
    Matrix out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
  }
};

class StepWorkspace {
 public:
  explicit StepWorkspace(Eigen::Index n) : x_re_(n, n), x_im_(n, n) {}

  // u <- V (cos - i sin) V^T u
  void apply(const StepFactor& f, SplitMatrix& u) {
    x_re_.noalias() = f.vectors.transpose() * u.re;
    x_im_.noalias() = f.vectors.transpose() * u.im;
    for (Eigen::Index j = 0; j < x_re_.cols(); ++j) {
      for (Eigen::Index i = 0; i < x_re_.rows(); ++i) {
        const double a = x_re_(i, j);
        const double b = x_im_(i, j);
        x_re_(i, j) = f.cos(i) * a + f.sin(i) * b;
        x_im_(i, j) = f.cos(i) * b - f.sin(i) * a;
      }
    }
    u.re.noalias() = f.vectors * x_re_;
    u.im.noalias() = f.vectors * x_im_;
  }

 private:
  RealMatrix x_re_;
  RealMatrix x_im_;
};

class FactorCache {
 public:
  FactorCache(const ProjectedHamiltonian& model, double dt, std::size_t budget)
      : model_(model), dt_(dt), budget_(budget) {}

  std::shared_ptr<const StepFactor> get(double s) {
    if (auto it = entries_.find(s); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
    auto factor = std::make_shared<const StepFactor>(make_factor(model_.at(s), dt_));
    ++computed_;
    if (used_ + factor->bytes() <= budget_) {
      used_ += factor->bytes();
      entries_.emplace(s, factor);
    }
    return factor;
  }

  std::size_t hits() const { return hits_; }
  std::size_t computed() const { return computed_; }

 private:
  const ProjectedHamiltonian& model_;
  double dt_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::size_t hits_ = 0;
  std::size_t computed_ = 0;
  std::map<double, std::shared_ptr<const StepFactor>> entries_;
};

}  // namespace

RampParams::RampParams(RampKind kind, double leg_time, double dt)
    : kind_(kind), leg_time_(leg_time), dt_(dt), leg_steps_(0) {
  if (!(leg_time > 0.0) || !std::isfinite(leg_time)) throw DomainError("ramp time T must be positive");
  if (!(dt > 0.0) || !(dt < 1.0)) throw DomainError("time step must satisfy 0 < dt < 1");
  const double ratio = leg_time / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw DomainError("T / dt must be an integer");
  }
  if (rounded > 1e9) throw CapacityError("too many time steps");
  leg_steps_ = static_cast<int>(rounded);
}

double RampParams::step_s(int m, StepSampling sampling) const {
  if (m < 0 || m >= steps()) throw DomainError("step index out of range");
  const double legs = static_cast<double>(leg_steps_);
  if (sampling == StepSampling::kLeftEdge) {
    const int k = m <= leg_steps_ ? m : 2 * leg_steps_ - m;
    return static_cast<double>(k) / legs;
  }
  const int k = m < leg_steps_ ? 2 * m + 1 : 4 * leg_steps_ - 2 * m - 1;
  return static_cast<double>(k) / (2.0 * legs);
}

double schedule_value(double t, const RampParams& params) {
  const double total = params.total_time();
  if (!(t >= 0.0) || t > total * (1.0 + 1e-12)) throw DomainError("time outside the ramp");
  const double leg = params.leg_time();
  const double s = t <= leg ? t / leg : (2.0 * leg - t) / leg;
  return std::clamp(s, 0.0, 1.0);
}

Matrix step_propagator(const Matrix& h, double dt) {
  if (h.rows() != h.cols()) throw DimensionError("step_propagator: matrix is not square");
  return expm_hermitian(h, dt);
}

Matrix step_propagator(const RealMatrix& h, double dt) {
  if (h.rows() != h.cols()) throw DimensionError("step_propagator: matrix is not square");
  return expm_symmetric(h, dt);
}

Matrix heisenberg_conjugate(const Matrix& a, const Matrix& u) {
  if (a.rows() != a.cols() || u.rows() != u.cols() || a.rows() != u.rows()) {
    throw DimensionError("heisenberg_conjugate: dimension mismatch");
  }
  const Matrix au = a * u;
  return u.adjoint() * au;
}

RampResult evolve_ramp(const HamiltonianSpec& spec, const RampParams& params,
                       std::optional<ParitySector> sector, const EvolveOptions& options) {
  const ProjectedHamiltonian model(spec, std::move(sector));
  const Eigen::Index n = model.dim();
  const int legs = params.leg_steps();
  const int q = params.steps();
  const double dt = params.dt();

  std::vector<char> marked(static_cast<std::size_t>(q) + 1, 0);
  if (options.checkpoint_stride > 0) {
    for (int m = options.checkpoint_stride; m <= q; m += options.checkpoint_stride) {
      marked[static_cast<std::size_t>(m)] = 1;
    }
  }
  for (int m : options.checkpoint_steps) {
    if (m < 1 || m > q) throw DomainError("checkpoint step outside the ramp");
    marked[static_cast<std::size_t>(m)] = 1;
  }
  const bool time_reversal =
      params.kind() == RampKind::kCyclic && options.backward == BackwardLeg::kTimeReversal;
  if (time_reversal) {
    for (int m = legs + 1; m < q; ++m) {
      if (marked[static_cast<std::size_t>(m)]) {
        throw DomainError("time-reversal backward leg has no intermediate checkpoints");
      }
    }
  }

  RampResult result;
  auto record = [&](int m, const Matrix& u) {
    if (!marked[static_cast<std::size_t>(m)]) return;
    const double t = dt * m;
    Checkpoint cp{m, t, schedule_value(t, params), Matrix()};
    if (options.observer) options.observer(cp, u);
    if (options.store_checkpoints) cp.unitary = u;
    result.checkpoints.push_back(std::move(cp));
  };

  // Only a cyclic accumulate ramp revisits s values.
  const std::size_t budget = params.kind() == RampKind::kCyclic && !time_reversal
                                 ? options.cache_budget_bytes
                                 : std::size_t{0};
  FactorCache cache(model, dt, budget);
  StepWorkspace work(n);

  SplitMatrix u = SplitMatrix::identity(n);
  for (int m = 0; m < legs; ++m) {
    work.apply(*cache.get(params.step_s(m, options.sampling)), u);
    if (marked[static_cast<std::size_t>(m) + 1]) record(m + 1, u.to_complex());
  }
  Matrix forward = u.to_complex();

  if (params.kind() == RampKind::kForward) {
    result.unitary = std::move(forward);
  } else if (!time_reversal) {
    SplitMatrix w = SplitMatrix::identity(n);
    for (int m = legs; m < q; ++m) {
      work.apply(*cache.get(params.step_s(m, options.sampling)), w);
      if (marked[static_cast<std::size_t>(m) + 1]) record(m + 1, w.to_complex() * forward);
    }
    result.unitary = w.to_complex() * forward;
    result.turnaround = std::move(forward);
  } else {
    // Each step propagator P is complex symmetric, so the reversed product of
    // forward propagators is U_FW^T.
    Matrix backward = forward.transpose();
    if (options.sampling == StepSampling::kLeftEdge) {
      // Backward legs visit s = 1, (L-1)/L, ..., 1/L: drop P(0), add P(1).
      const Matrix first = expm_symmetric(model.at(params.step_s(0)), dt);
      const Matrix last = expm_symmetric(model.at(params.step_s(legs)), dt);
      backward = first.adjoint() * (backward * last);
    }
    result.unitary = backward * forward;
    result.turnaround = std::move(forward);
    if (marked[static_cast<std::size_t>(q)]) record(q, result.unitary);
  }
  result.eigendecompositions = cache.computed() + (time_reversal ? 2 : 0);
  result.cache_hits = cache.hits();
  return result;
}

Matrix evolve_sequence(const ProjectedHamiltonian& model, std::span<const double> s_values,
                       double dt) {
  StepWorkspace work(model.dim());
  SplitMatrix u = SplitMatrix::identity(model.dim());
  for (double s : s_values) work.apply(make_factor(model.at(s), dt), u);
  return u.to_complex();
}

HamiltonianAction::HamiltonianAction(const HamiltonianSpec& spec)
    : n_sites_(spec.n_sites()), diagonal_(qachaos::problem_diagonal(spec)) {
  diagonal_max_ = diagonal_.size() == 0 ? 0.0 : diagonal_.cwiseAbs().maxCoeff();
}

void HamiltonianAction::apply(double s, const Matrix& in, Matrix& out) const {
  const Eigen::Index d = dim();
  if (in.rows() != d) throw DimensionError("HamiltonianAction: state dimension mismatch");
  out.resize(d, in.cols());
  const double w = 1.0 - s;
  for (Eigen::Index c = 0; c < in.cols(); ++c) {
    auto x = in.col(c);
    auto y = out.col(c);
    y = (s * diagonal_).cast<Complex>().cwiseProduct(x);
    if (w == 0.0) continue;
    for (int p = 0; p < n_sites_; ++p) {
      const Eigen::Index h = Eigen::Index{1} << p;
      for (Eigen::Index base = 0; base < d; base += 2 * h) {
        y.segment(base, h) += w * x.segment(base + h, h);
        y.segment(base + h, h) += w * x.segment(base, h);
      }
    }
  }
}

double HamiltonianAction::norm_bound(double s) const {
  return (1.0 - s) * n_sites_ + s * diagonal_max_;
}

void exact_step(const HamiltonianAction& h, double s, double dt, Matrix& states) {
  const double scaled = std::abs(dt) * h.norm_bound(s);
  const int substeps = std::max(1, static_cast<int>(std::ceil(scaled / 2.0)));
  const double tau = dt / substeps;
  Matrix term;
  Matrix next;
  for (int sub = 0; sub < substeps; ++sub) {
    term = states;
    for (int k = 1; k <= 80; ++k) {
      h.apply(s, term, next);
      term = next * Complex(0.0, -tau / k);
      states += term;
      if (term.norm() <= 1e-16 * states.norm()) break;
    }
  }
}

StateEvolution evolve_states(const HamiltonianSpec& spec, const RampParams& params,
                             Matrix initial, StepSampling sampling) {
  const HamiltonianAction h(spec);
  if (initial.rows() != h.dim()) throw DimensionError("evolve_states: states are not full-space");
  StateEvolution out;
  for (int m = 0; m < params.steps(); ++m) {
    exact_step(h, params.step_s(m, sampling), params.dt(), initial);
    if (params.kind() == RampKind::kCyclic && m + 1 == params.leg_steps()) {
      out.turnaround_states = initial;
    }
  }
  out.final_states = std::move(initial);
  return out;
}

}  // namespace qachaos
