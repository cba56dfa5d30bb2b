#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qachaos/evolution.hpp"
#include "qachaos/linalg.hpp"
#include "qachaos/model.hpp"

namespace qachaos {

/// Weight of an operator on Pauli strings of each size k = 0..N.
struct SizeDistribution {
  int n_sites = 0;
  std::vector<double> probabilities;  // P_k, sums to 1
  double mean = 0.0;                  // sum_k k P_k
  double identity_weight = 0.0;       // share of |tr(A)|^2, zero for traceless A
  double time = 0.0;
  std::string label;
};

// P_k proportional to sum_{|Q| = k} |tr(Q A)|^2. The identity string only
// enters when A has a trace. N <= 7.
SizeDistribution operator_size_distribution(const Matrix& a, int n_sites);

enum class InitialOperator { kSigmaX, kSigmaY, kSigmaZ, kSpinX, kSpinY, kSpinZ };

// Accepts "sx_i0", "sy_i0", "sz_i0", "Sx", "Sy", "Sz".
InitialOperator parse_initial_operator(std::string_view text);
std::string to_string(InitialOperator op);

// Single-site operators act on site floor(N/2), the chain centre.
int central_site(int n_sites);
Matrix initial_operator(InitialOperator op, int n_sites);

// Full-space Heisenberg evolution of the initial operator with an OSD at
// t = 0 and at `samples_per_leg` evenly spaced times on each leg.
std::vector<SizeDistribution> mean_size_trace(const HamiltonianSpec& spec, const RampParams& params,
                                              InitialOperator op, int samples_per_leg = 50);

// Mean size under the uniform distribution over the 4^N - 1 non-identity
// strings: sum_k k 3^k C(N, k) / (4^N - 1), which tends to 3N/4.
double haar_mean_size(int n_sites);

}  // namespace qachaos
