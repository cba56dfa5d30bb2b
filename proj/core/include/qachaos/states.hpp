#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qachaos/evolution.hpp"
#include "qachaos/linalg.hpp"
#include "qachaos/model.hpp"

namespace qachaos {

/// Normalized full-space state of an N-site chain.
struct PureState {
  int n_sites = 0;
  Vector amplitudes;
};

// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> on every site.
PureState spin_coherent_state(double theta, double phi, int n_sites);

// Uniform superposition of x-basis product states with exactly k sites in |+>
// and N - k in |->, so H_M |D_k> = (2k - N) |D_k> and D_0 = |->^N.
PureState dicke_state(int k, int n_sites);

double fidelity(const Vector& psi, const Vector& chi);

// Left block of `cut` sites; cut in [1, N-1].
Matrix reduced_density_matrix(const Vector& psi, int n_sites, int cut);

// -sum p log p over the spectrum of rho (natural log); eigenvalues below
// 1e-14 contribute zero. Rejects trace or positivity violations beyond 1e-8.
double entanglement_entropy(const Matrix& rho);

// Von Neumann entropy of the left `cut` sites from the Schmidt spectrum.
double block_entropy(const Vector& psi, int n_sites, int cut);
// Cut at floor(N/2).
double half_chain_entropy(const Vector& psi, int n_sites);

// (N/2) log 2 - 1/2.
double page_value(int n_sites);

// <psi|H_M|psi> for a full-space state.
double mixer_expectation(const Vector& psi, int n_sites);

// Weight of psi in the lowest eigenspace of the diagonal H_P (degenerate
// ground configurations are summed).
double problem_ground_weight(const Vector& psi, const HamiltonianSpec& spec, double tol = 1e-9);

struct EntropyRecord {
  double phi = 0.0;             // angle for coherent states, k for Dicke states
  double energy_density = 0.0;  // <H_M> / N of the initial state
  double entropy_final = 0.0;   // S_A at the end of the ramp
  std::optional<double> entropy_turnaround;  // S_A(T) on a cyclic ramp
  std::optional<double> fidelity;            // |<psi(2T)|psi(0)>|^2 on a cyclic ramp
  int n_sites = 0;
};

// Evolves |pi/2, phi> for every phi through the ramp.
std::vector<EntropyRecord> scs_sweep(const HamiltonianSpec& spec, const RampParams& params,
                                     std::span<const double> phi_grid, int threads = 1);

// Same for the Dicke states k = 0..N.
std::vector<EntropyRecord> dicke_sweep(const HamiltonianSpec& spec, const RampParams& params,
                                       int threads = 1);

}  // namespace qachaos
