#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qachaos/evolution.hpp"
#include "qachaos/linalg.hpp"
#include "qachaos/model.hpp"
#include "qachaos/spectral.hpp"

namespace qachaos {

struct EigenRecord {
  double phase = 0.0;           // U|v> = exp(-i phase)|v>, phase in [0, 2pi)
  double mean_energy = 0.0;     // <v|H_ref|v>
  double energy_density = 0.0;  // mean_energy mapped affinely from [e_min, e_max] to [-1, 1]
  double entropy = 0.0;         // half-chain S_A of the full-space embedding
  bool degenerate = false;      // phase within 1e-10 of a neighbour; basis-dependent S_A
};

struct EigenProfile {
  int n_sites = 0;
  double energy_min = 0.0;  // extreme eigenvalues of H_ref in the sector
  double energy_max = 0.0;
  std::vector<EigenRecord> records;  // ascending phase
};

// Eigenvectors of a sector unitary profiled against a sector-restricted H_ref.
EigenProfile eigenprofile(const Matrix& u, const RealMatrix& h_ref, const ParitySector& sector);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

struct OnsetPoint {
  int step = 0;
  double t = 0.0;
  double s = 0.0;
  double mlsr = 0.0;  // NaN when every spacing was degenerate
};

struct OnsetOptions {
  double reference = kMlsrCoe;
  double band = 0.01;
  int checkpoint_stride = 0;  // 0 means q / 100
  int confirmations = 3;      // following checkpoints that must stay inside the band
};

struct OnsetResult {
  bool found = false;
  double t_star = 0.0;
  double s_star = 0.0;
  std::vector<OnsetPoint> trace;
};

// First trace entry inside [reference - band, reference + band] that stays
// inside for the next `confirmations` entries (fewer at the end of the trace).
OnsetResult detect_onset(std::vector<OnsetPoint> trace, const OnsetOptions& options = {});

// Runs the forward ramp and tracks the eigenphase MLSR of U(t) at checkpoints.
OnsetResult chaos_onset(const HamiltonianSpec& spec, const RampParams& params,
                        const ParitySector& sector, const OnsetOptions& options = {});

struct ScalingBin {
  double center = 0.0;
  double width = 0.0;
  std::vector<int> sizes;
  std::vector<double> mean_entropy;  // per size
  std::vector<std::size_t> counts;   // per size
  double slope = 0.0;                // S_A ~ slope * N + intercept
  double intercept = 0.0;
  double residual_rms = 0.0;
  std::size_t n_points = 0;
};

struct ScalingFit {
  double bin_width = 0.0;
  std::vector<ScalingBin> bins;
};

/// Window-averaged eigenvector entropy per energy-density bin, regressed
/// linearly on N. The bin width doubles from `bin_width_init` until every bin
/// holds a non-degenerate record for every size.
ScalingFit scaling_regression(std::span<const EigenProfile> profiles,
                              double bin_width_init = 0.05);

}  // namespace qachaos
