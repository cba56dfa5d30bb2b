#include "qachaos/scrambling.hpp"

#include <algorithm>
#include <cmath>

#include "qachaos/errors.hpp"
#include "qachaos/pauli.hpp"

namespace qachaos {

SizeDistribution operator_size_distribution(const Matrix& a, int n_sites) {
  if (n_sites > kMaxPauliSites) {
    throw CapacityError("operator size distributions support at most " +
                        std::to_string(kMaxPauliSites) + " sites");
  }
  const std::vector<Complex> coefficients = pauli_decomposition(a, n_sites);
  std::vector<double> by_size(static_cast<std::size_t>(n_sites) + 1, 0.0);
  for (std::size_t index = 0; index < coefficients.size(); ++index) {
    const PauliString q = PauliString::from_index(n_sites, index);
    by_size[static_cast<std::size_t>(q.size())] += std::norm(coefficients[index]);
  }
  double total = 0.0;
  for (double w : by_size) total += w;
  if (!(total > 0.0)) throw DomainError("operator is zero");

  SizeDistribution out;
  out.n_sites = n_sites;
  // Traceless up to rounding: the identity share is dropped.
  const bool traced = by_size[0] > 1e-24 * total;
  if (!traced) {
    total -= by_size[0];
    by_size[0] = 0.0;
  }
  out.identity_weight = by_size[0] / total;
  out.probabilities.resize(by_size.size());
  for (std::size_t k = 0; k < by_size.size(); ++k) {
    out.probabilities[k] = by_size[k] / total;
    out.mean += static_cast<double>(k) * out.probabilities[k];
  }
  return out;
}

InitialOperator parse_initial_operator(std::string_view text) {
  if (text == "sx_i0") return InitialOperator::kSigmaX;
  if (text == "sy_i0") return InitialOperator::kSigmaY;
  if (text == "sz_i0") return InitialOperator::kSigmaZ;
  if (text == "Sx") return InitialOperator::kSpinX;
  if (text == "Sy") return InitialOperator::kSpinY;
  if (text == "Sz") return InitialOperator::kSpinZ;
  throw DomainError("unknown initial operator '" + std::string(text) + "'");
}

std::string to_string(InitialOperator op) {
  switch (op) {
    case InitialOperator::kSigmaX:
      return "sx_i0";
    case InitialOperator::kSigmaY:
      return "sy_i0";
    case InitialOperator::kSigmaZ:
      return "sz_i0";
    case InitialOperator::kSpinX:
      return "Sx";
    case InitialOperator::kSpinY:
      return "Sy";
    case InitialOperator::kSpinZ:
      return "Sz";
  }
  return "?";
}

int central_site(int n_sites) { return n_sites / 2; }

Matrix initial_operator(InitialOperator op, int n_sites) {
  switch (op) {
    case InitialOperator::kSigmaX:
      return pauli_matrix(PauliString::single(n_sites, central_site(n_sites), PauliAxis::kX));
    case InitialOperator::kSigmaY:
      return pauli_matrix(PauliString::single(n_sites, central_site(n_sites), PauliAxis::kY));
    case InitialOperator::kSigmaZ:
      return pauli_matrix(PauliString::single(n_sites, central_site(n_sites), PauliAxis::kZ));
    case InitialOperator::kSpinX:
      return collective_spin(PauliAxis::kX, n_sites);
    case InitialOperator::kSpinY:
      return collective_spin(PauliAxis::kY, n_sites);
    case InitialOperator::kSpinZ:
      return collective_spin(PauliAxis::kZ, n_sites);
  }
  throw DomainError("unknown initial operator");
}

std::vector<SizeDistribution> mean_size_trace(const HamiltonianSpec& spec, const RampParams& params,
                                              InitialOperator op, int samples_per_leg) {
  const int n = spec.n_sites();
  if (n > kMaxPauliSites) {
    throw CapacityError("scrambling traces support at most " + std::to_string(kMaxPauliSites) +
                        " sites");
  }
  if (samples_per_leg < 1) throw DomainError("samples_per_leg must be positive");
  const Matrix a0 = initial_operator(op, n);
  const int legs = params.leg_steps();
  const int q = params.steps();

  EvolveOptions options;
  for (int leg = 0; leg * legs < q; ++leg) {
    for (int j = 1; j <= samples_per_leg; ++j) {
      const auto m = static_cast<int>(std::lround(static_cast<double>(j) * legs / samples_per_leg));
      if (m >= 1) options.checkpoint_steps.push_back(leg * legs + m);
    }
  }
  std::sort(options.checkpoint_steps.begin(), options.checkpoint_steps.end());
  options.checkpoint_steps.erase(
      std::unique(options.checkpoint_steps.begin(), options.checkpoint_steps.end()),
      options.checkpoint_steps.end());

  std::vector<SizeDistribution> trace;
  SizeDistribution start = operator_size_distribution(a0, n);
  start.label = to_string(op);
  start.time = 0.0;
  trace.push_back(std::move(start));
  options.observer = [&](const Checkpoint& cp, const Matrix& u) {
    SizeDistribution d = operator_size_distribution(heisenberg_conjugate(a0, u), n);
    d.label = to_string(op);
    d.time = cp.t;
    trace.push_back(std::move(d));
  };
  evolve_ramp(spec, params, std::nullopt, options);
  return trace;
}

double haar_mean_size(int n_sites) {
  if (n_sites < 1) throw DomainError("n_sites must be positive");
  long double weighted = 0.0L;
  long double binom = 1.0L;  // C(N, k)
  long double three_k = 1.0L;
  for (int k = 1; k <= n_sites; ++k) {
    binom = binom * (n_sites - k + 1) / k;
    three_k *= 3.0L;
    weighted += static_cast<long double>(k) * three_k * binom;
  }
  const long double strings = std::pow(4.0L, n_sites) - 1.0L;
  return static_cast<double>(weighted / strings);
}

}  // namespace qachaos
