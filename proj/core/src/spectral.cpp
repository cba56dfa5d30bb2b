#include "qachaos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "qachaos/errors.hpp"
#include "qachaos/parallel.hpp"

namespace qachaos {
namespace {

constexpr std::size_t kMinRetainedLevels = 10;

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> to_vector(const RealVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::vector<double> level_spacings(std::span<const double> sorted_values) {
  if (sorted_values.size() < 2) throw DomainError("level_spacings needs at least two values");
  std::vector<double> gaps(sorted_values.size() - 1);
  for (std::size_t j = 0; j + 1 < sorted_values.size(); ++j) {
    gaps[j] = sorted_values[j + 1] - sorted_values[j];
    if (gaps[j] < 0.0) throw DomainError("level_spacings: values are not sorted");
  }
  return gaps;
}

SpacingRatios spacing_ratios(std::span<const double> gaps, double degeneracy_tol) {
  if (gaps.size() < 2) throw DomainError("spacing_ratios needs at least two gaps");
  SpacingRatios out;
  out.ratios.reserve(gaps.size() - 1);
  for (std::size_t j = 0; j + 1 < gaps.size(); ++j) {
    const double a = gaps[j];
    const double b = gaps[j + 1];
    if (a < degeneracy_tol || b < degeneracy_tol) {
      ++out.skipped;
      continue;
    }
    out.ratios.push_back(std::min(a, b) / std::max(a, b));
  }
  if (out.ratios.empty()) {
    throw EmptyStatisticsError("every spacing pair was degenerate");
  }
  return out;
}

SpectrumResult hermitian_level_statistics(std::span<const double> sorted_values,
                                          double bulk_trim) {
  if (!(bulk_trim >= 0.0 && bulk_trim < 0.5)) throw DomainError("bulk_trim must lie in [0, 0.5)");
  const std::size_t n = sorted_values.size();
  const auto drop = static_cast<std::size_t>(std::floor(bulk_trim * static_cast<double>(n)));
  if (n < 2 * drop + kMinRetainedLevels) {
    throw DomainError("too few levels retained after trimming (" + std::to_string(n - 2 * drop) +
                      ")");
  }
  const double width = sorted_values.back() - sorted_values.front();
  SpectrumResult out;
  out.values.assign(sorted_values.begin() + static_cast<std::ptrdiff_t>(drop),
                    sorted_values.end() - static_cast<std::ptrdiff_t>(drop));
  out.gaps = level_spacings(out.values);
  SpacingRatios r = spacing_ratios(out.gaps, 1e-10 * width);
  out.ratios = std::move(r.ratios);
  out.skipped = r.skipped;
  out.mlsr = mean(out.ratios);
  return out;
}

SpectrumResult phase_level_statistics(std::span<const double> sorted_phases) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (sorted_phases.size() < 3) throw DomainError("need at least three eigenphases");
  if (sorted_phases.front() < 0.0 || sorted_phases.back() >= two_pi) {
    throw DomainError("eigenphases must lie in [0, 2pi)");
  }
  SpectrumResult out;
  out.values.assign(sorted_phases.begin(), sorted_phases.end());
  out.gaps = level_spacings(out.values);
  out.gaps.push_back(two_pi - out.values.back() + out.values.front());
  // Close the circle so every gap has two neighbours.
  std::vector<double> circular = out.gaps;
  circular.push_back(out.gaps.front());
  SpacingRatios r = spacing_ratios(circular, 1e-10 * two_pi);
  out.ratios = std::move(r.ratios);
  out.skipped = r.skipped;
  out.mlsr = mean(out.ratios);
  return out;
}

double mlsr_hermitian(const RealMatrix& h, double bulk_trim) {
  const SymmetricEigen eig = symmetric_eigen(h, false);
  return hermitian_level_statistics(to_vector(eig.values), bulk_trim).mlsr;
}

double mlsr_hermitian(const Matrix& h, double bulk_trim) {
  const HermitianEigen eig = hermitian_eigen(h, false);
  return hermitian_level_statistics(to_vector(eig.values), bulk_trim).mlsr;
}

double mlsr_unitary(const Matrix& u) {
  const UnitaryEigen eig = unitary_eigen(u, false);
  return phase_level_statistics(to_vector(eig.phases)).mlsr;
}

std::vector<MlsrPoint> mlsr_sweep(const HamiltonianSpec& spec, std::span<const double> s_grid,
                                  int sector_sign, double bulk_trim, int threads) {
  const ProjectedHamiltonian model(spec, parity_sector(spec, sector_sign));
  std::vector<MlsrPoint> out(s_grid.size());
  parallel_for(s_grid.size(), threads, [&](std::size_t i) {
    const SymmetricEigen eig = symmetric_eigen(model.at(s_grid[i]), false);
    const SpectrumResult r = hermitian_level_statistics(to_vector(eig.values), bulk_trim);
    out[i] = {s_grid[i], r.mlsr, r.skipped_fraction()};
  });
  return out;
}

std::vector<GapPoint> gap_profile(const HamiltonianSpec& spec, std::span<const double> s_grid,
                                  int sector_sign, int threads) {
  const ProjectedHamiltonian model(spec, parity_sector(spec, sector_sign));
  if (model.dim() < 2) throw DomainError("gap_profile needs a sector with two or more levels");
  std::vector<GapPoint> out(s_grid.size());
  parallel_for(s_grid.size(), threads, [&](std::size_t i) {
    const RealVector e = symmetric_eigen(model.at(s_grid[i]), false).values;
    const Eigen::Index d = e.size();
    out[i] = {s_grid[i], e(1) - e(0), (e(d - 1) - e(0)) / static_cast<double>(d - 1)};
  });
  return out;
}

double adiabatic_time_bound(const HamiltonianSpec& spec, std::span<const double> s_grid,
                            int level, AdiabaticGap gap, int sector_sign) {
  const ProjectedHamiltonian model(spec, parity_sector(spec, sector_sign));
  const Eigen::Index d = model.dim();
  if (level < 0 || level >= d) throw DomainError("level index outside the sector");
  const RealMatrix dh = model.derivative();
  double bound = 0.0;
  for (double s : s_grid) {
    const SymmetricEigen eig = symmetric_eigen(model.at(s), true);
    const RealVector& e = eig.values;
    const RealVector coupling = eig.vectors.transpose() * (dh * eig.vectors.col(level));
    double nearest = std::numeric_limits<double>::infinity();
    if (level > 0) nearest = std::min(nearest, e(level) - e(level - 1));
    if (level + 1 < d) nearest = std::min(nearest, e(level + 1) - e(level));
    if (nearest < 1e-8) {
      throw DomainError("level " + std::to_string(level) + " is degenerate at s=" +
                        std::to_string(s));
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      if (k == level) continue;
      if (gap == AdiabaticGap::kNearestNeighbor && std::abs(k - level) != 1) continue;
      const double delta = std::abs(e(k) - e(level));
      if (delta < 1e-8) continue;
      bound = std::max(bound, std::abs(coupling(k)) / (delta * delta));
    }
  }
  return bound;
}

}  // namespace qachaos
