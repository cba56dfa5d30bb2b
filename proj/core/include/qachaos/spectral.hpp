#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qachaos/linalg.hpp"
#include "qachaos/model.hpp"

namespace qachaos {

// Reference mean spacing ratios (min/max convention).
inline constexpr double kMlsrGoe = 0.535;
inline constexpr double kMlsrCoe = 0.529;
inline constexpr double kMlsrPoisson = 0.386;

struct SpacingRatios {
  std::vector<double> ratios;  // min/max of adjacent gaps, in [0, 1]
  std::size_t skipped = 0;     // pairs rejected because a gap fell below tolerance
};

/// Level statistics of one spectrum.
struct SpectrumResult {
  std::vector<double> values;  // retained levels (or phases), ascending
  std::vector<double> gaps;
  std::vector<double> ratios;
  std::size_t skipped = 0;
  double mlsr = 0.0;

  double skipped_fraction() const {
    const std::size_t total = ratios.size() + skipped;
    return total == 0 ? 0.0 : static_cast<double>(skipped) / static_cast<double>(total);
  }
};

// Consecutive differences; throws DomainError if the input is not ascending.
std::vector<double> level_spacings(std::span<const double> sorted_values);

// r_j = min(g_j, g_{j+1}) / max(g_j, g_{j+1}); pairs with a gap below
// `degeneracy_tol` are skipped. Throws EmptyStatisticsError if none survive.
SpacingRatios spacing_ratios(std::span<const double> gaps, double degeneracy_tol);

// Drops floor(bulk_trim * n) levels at each end of the sorted spectrum.
// The degeneracy tolerance is 1e-10 times the full spectral width.
SpectrumResult hermitian_level_statistics(std::span<const double> sorted_values,
                                          double bulk_trim = 0.05);

// Eigenphases in [0, 2pi) including the wraparound gap, no trimming.
SpectrumResult phase_level_statistics(std::span<const double> sorted_phases);

double mlsr_hermitian(const RealMatrix& h, double bulk_trim = 0.05);
double mlsr_hermitian(const Matrix& h, double bulk_trim = 0.05);
double mlsr_unitary(const Matrix& u);

struct MlsrPoint {
  double s;
  double mlsr;
  double skipped_fraction;
};

// MLSR of H(s) in the given parity sector at each grid point.
std::vector<MlsrPoint> mlsr_sweep(const HamiltonianSpec& spec, std::span<const double> s_grid,
                                  int sector_sign = 1, double bulk_trim = 0.05, int threads = 1);

struct GapPoint {
  double s;
  double ground_gap;   // e_1 - e_0
  double average_gap;  // (e_max - e_0) / (d - 1)
};

std::vector<GapPoint> gap_profile(const HamiltonianSpec& spec, std::span<const double> s_grid,
                                  int sector_sign = 1, int threads = 1);

enum class AdiabaticGap {
  kNearestNeighbor,  // only levels n - 1 and n + 1
  kAllLevels,        // every k != n with its own gap
};

/// max over the grid of |<k| dH/ds |n>| / (e_k - e_n)^2 for H(s) restricted to
/// the parity sector. Throws DomainError if level n touches a neighbor
/// (gap below 1e-8) at some grid point.
double adiabatic_time_bound(const HamiltonianSpec& spec, std::span<const double> s_grid,
                            int level, AdiabaticGap gap = AdiabaticGap::kNearestNeighbor,
                            int sector_sign = 1);

}  // namespace qachaos
