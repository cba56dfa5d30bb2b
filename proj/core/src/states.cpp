#include "qachaos/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qachaos/errors.hpp"
#include "qachaos/parallel.hpp"
#include "qachaos/pauli.hpp"

namespace qachaos {
namespace {

void check_state(const Vector& psi, int n_sites) {
  if (n_sites < 1 || n_sites > 26) throw DomainError("n_sites out of range");
  if (psi.size() != (Eigen::Index{1} << n_sites)) {
    throw DimensionError("state length does not match 2^N");
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Schmidt coefficients squared of psi across the cut after `cut` sites.
RealVector schmidt_weights(const Vector& psi, int n_sites, int cut) {
  const Eigen::Index right = Eigen::Index{1} << (n_sites - cut);
  const Eigen::Index left = Eigen::Index{1} << cut;
  // Column-major map: element (b, a) = psi[a * right + b].
  const Eigen::Map<const Matrix> m(psi.data(), right, left);
  const Matrix gram = left <= right ? Matrix(m.transpose() * m.conjugate())
                                    : Matrix(m * m.adjoint());
  return hermitian_eigen(gram, false).values;
}

double entropy_of(const RealVector& weights) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    const double p = weights(i);
    if (p > 1e-14) s -= p * std::log(p);
  }
  return s;
}

std::vector<EntropyRecord> sweep_states(const HamiltonianSpec& spec, const RampParams& params,
                                        const std::vector<PureState>& initial,
                                        const std::vector<double>& labels, int threads) {
  const int n = spec.n_sites();
  std::vector<EntropyRecord> out(initial.size());
  parallel_for(initial.size(), threads, [&](std::size_t i) {
    const Vector& psi0 = initial[i].amplitudes;
    const StateEvolution ev = evolve_states(spec, params, psi0);
    EntropyRecord rec;
    rec.phi = labels[i];
    rec.n_sites = n;
    rec.energy_density = mixer_expectation(psi0, n) / n;
    rec.entropy_final = half_chain_entropy(ev.final_states.col(0), n);
    if (ev.turnaround_states) {
      rec.entropy_turnaround = half_chain_entropy(ev.turnaround_states->col(0), n);
      rec.fidelity = fidelity(ev.final_states.col(0), psi0);
    }
    out[i] = rec;
  });
  return out;
}

}  // namespace

PureState spin_coherent_state(double theta, double phi, int n_sites) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw DomainError("theta must lie in [0, pi]");
  if (n_sites < 1 || n_sites > 26) throw DomainError("n_sites out of range");
  const Complex up = std::cos(theta / 2.0);
  const Complex down = std::polar(std::sin(theta / 2.0), phi);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  PureState out{n_sites, Vector(dim)};
  for (Eigen::Index b = 0; b < dim; ++b) {
    const int ones = popcount(static_cast<std::uint64_t>(b));
    out.amplitudes(b) = std::pow(up, n_sites - ones) * std::pow(down, ones);
  }
  return out;
}

PureState dicke_state(int k, int n_sites) {
  if (n_sites < 1 || n_sites > 26) throw DomainError("n_sites out of range");
  if (k < 0 || k > n_sites) throw DomainError("Dicke index k must lie in [0, N]");
  // |+> = H|0>, |-> = H|1>: sum over z with N - k ones of H^N |z>. The
  // amplitude on |b> is a Krawtchouk polynomial of the weight of b.
  const int ones = n_sites - k;
  std::vector<double> by_weight(static_cast<std::size_t>(n_sites) + 1);
  for (int w = 0; w <= n_sites; ++w) {
    double acc = 0.0;
    for (int j = 0; j <= std::min(w, ones); ++j) {
      acc += ((j & 1) ? -1.0 : 1.0) * binomial(w, j) * binomial(n_sites - w, ones - j);
    }
    by_weight[static_cast<std::size_t>(w)] = acc;
  }
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  const double norm = 1.0 / std::sqrt(binomial(n_sites, ones) * static_cast<double>(dim));
  PureState out{n_sites, Vector(dim)};
  for (Eigen::Index b = 0; b < dim; ++b) {
    out.amplitudes(b) = norm * by_weight[static_cast<std::size_t>(popcount(static_cast<std::uint64_t>(b)))];
  }
  return out;
}

double fidelity(const Vector& psi, const Vector& chi) {
  if (psi.size() != chi.size()) throw DimensionError("fidelity: dimension mismatch");
  return std::min(1.0, std::norm(psi.dot(chi)));
}

Matrix reduced_density_matrix(const Vector& psi, int n_sites, int cut) {
  check_state(psi, n_sites);
  if (cut < 1 || cut > n_sites - 1) throw DomainError("cut must lie in [1, N-1]");
  const Eigen::Index right = Eigen::Index{1} << (n_sites - cut);
  const Eigen::Index left = Eigen::Index{1} << cut;
  const Eigen::Map<const Matrix> m(psi.data(), right, left);
  return m.transpose() * m.conjugate();
}

double entanglement_entropy(const Matrix& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix is not square");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-8) throw DomainError("density matrix trace differs from 1");
  if (hermiticity_defect(rho) > 1e-8) throw DomainError("density matrix is not Hermitian");
  const RealVector p = hermitian_eigen(rho, false).values;
  if (p.size() > 0 && p.minCoeff() < -1e-8) throw DomainError("density matrix is not PSD");
  return entropy_of(p);
}

double block_entropy(const Vector& psi, int n_sites, int cut) {
  check_state(psi, n_sites);
  if (cut < 1 || cut > n_sites - 1) throw DomainError("cut must lie in [1, N-1]");
  return entropy_of(schmidt_weights(psi, n_sites, cut));
}

double half_chain_entropy(const Vector& psi, int n_sites) {
  if (n_sites < 2) throw DomainError("half-chain entropy needs two or more sites");
  return block_entropy(psi, n_sites, n_sites / 2);
}

double page_value(int n_sites) {
  return 0.5 * n_sites * std::numbers::ln2 - 0.5;
}

double mixer_expectation(const Vector& psi, int n_sites) {
  check_state(psi, n_sites);
  const Eigen::Index dim = psi.size();
  double acc = 0.0;
  for (int site = 0; site < n_sites; ++site) {
    const auto flip = static_cast<Eigen::Index>(site_bit(n_sites, site));
    for (Eigen::Index b = 0; b < dim; ++b) acc += std::real(std::conj(psi(b)) * psi(b ^ flip));
  }
  return acc;
}

double problem_ground_weight(const Vector& psi, const HamiltonianSpec& spec, double tol) {
  check_state(psi, spec.n_sites());
  const RealVector diag = problem_diagonal(spec);
  const double ground = diag.minCoeff();
  double weight = 0.0;
  for (Eigen::Index b = 0; b < diag.size(); ++b) {
    if (diag(b) <= ground + tol) weight += std::norm(psi(b));
  }
  return weight;
}

std::vector<EntropyRecord> scs_sweep(const HamiltonianSpec& spec, const RampParams& params,
                                     std::span<const double> phi_grid, int threads) {
  std::vector<PureState> initial;
  std::vector<double> labels(phi_grid.begin(), phi_grid.end());
  for (double phi : phi_grid) {
    initial.push_back(spin_coherent_state(std::numbers::pi / 2.0, phi, spec.n_sites()));
  }
  return sweep_states(spec, params, initial, labels, threads);
}

std::vector<EntropyRecord> dicke_sweep(const HamiltonianSpec& spec, const RampParams& params,
                                       int threads) {
  std::vector<PureState> initial;
  std::vector<double> labels;
  for (int k = 0; k <= spec.n_sites(); ++k) {
    initial.push_back(dicke_state(k, spec.n_sites()));
    labels.push_back(k);
  }
  return sweep_states(spec, params, initial, labels, threads);
}

}  // namespace qachaos
