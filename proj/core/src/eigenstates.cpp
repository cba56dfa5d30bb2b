#include "qachaos/eigenstates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "qachaos/errors.hpp"
#include "qachaos/states.hpp"

namespace qachaos {

EigenProfile eigenprofile(const Matrix& u, const RealMatrix& h_ref, const ParitySector& sector) {
  const Eigen::Index d = sector.dim();
  if (u.rows() != d || u.cols() != d) throw DimensionError("eigenprofile: U is not a sector matrix");
  if (h_ref.rows() != d || h_ref.cols() != d) {
    throw DimensionError("eigenprofile: H_ref is not a sector matrix");
  }
  const int n = sector.n_sites();
  const UnitaryEigen eig = unitary_eigen(u, true);
  const RealVector levels = symmetric_eigen(h_ref, false).values;

  EigenProfile out;
  out.n_sites = n;
  out.energy_min = levels(0);
  out.energy_max = levels(d - 1);
  const double span = out.energy_max - out.energy_min;
  const RealMatrix h_sym = 0.5 * (h_ref + h_ref.transpose());

  constexpr double two_pi = 2.0 * std::numbers::pi;
  out.records.resize(static_cast<std::size_t>(d));
  for (Eigen::Index l = 0; l < d; ++l) {
    const Vector v = eig.vectors.col(l);
    EigenRecord& rec = out.records[static_cast<std::size_t>(l)];
    rec.phase = eig.phases(l);
    rec.mean_energy = (v.adjoint() * (h_sym * v))(0).real();
    rec.energy_density = span > 0.0 ? 2.0 * (rec.mean_energy - out.energy_min) / span - 1.0 : 0.0;
    rec.entropy = n >= 2 ? half_chain_entropy(sector.embed(v), n) : 0.0;
    if (d > 1) {
      const double prev = l > 0 ? eig.phases(l) - eig.phases(l - 1)
                                : two_pi - eig.phases(d - 1) + eig.phases(0);
      const double next = l + 1 < d ? eig.phases(l + 1) - eig.phases(l)
                                    : two_pi - eig.phases(d - 1) + eig.phases(0);
      rec.degenerate = std::min(prev, next) < 1e-10;
    }
  }
  return out;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("correlation needs paired samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

OnsetResult detect_onset(std::vector<OnsetPoint> trace, const OnsetOptions& options) {
  OnsetResult out;
  auto inside = [&](const OnsetPoint& p) {
    return std::isfinite(p.mlsr) && std::abs(p.mlsr - options.reference) <= options.band;
  };
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const std::size_t end =
        std::min(trace.size(), i + 1 + static_cast<std::size_t>(std::max(options.confirmations, 0)));
    bool ok = true;
    for (std::size_t j = i; j < end && ok; ++j) ok = inside(trace[j]);
    if (ok) {
      out.found = true;
      out.t_star = trace[i].t;
      out.s_star = trace[i].s;
      break;
    }
  }
  out.trace = std::move(trace);
  return out;
}

OnsetResult chaos_onset(const HamiltonianSpec& spec, const RampParams& params,
                        const ParitySector& sector, const OnsetOptions& options) {
  if (params.kind() != RampKind::kForward) throw DomainError("chaos_onset expects a forward ramp");
  EvolveOptions evolve;
  evolve.checkpoint_stride =
      options.checkpoint_stride > 0 ? options.checkpoint_stride : std::max(1, params.steps() / 100);
  std::vector<OnsetPoint> trace;
  evolve.observer = [&](const Checkpoint& cp, const Matrix& u) {
    double value = std::numeric_limits<double>::quiet_NaN();
    try {
      value = mlsr_unitary(u);
    } catch (const EmptyStatisticsError&) {
    }
    trace.push_back({cp.step, cp.t, cp.s, value});
  };
  evolve_ramp(spec, params, sector, evolve);
  return detect_onset(std::move(trace), options);
}

namespace {

std::size_t bin_index(double e, double width, std::size_t bins) {
  const double clamped = std::clamp(e, -1.0, 1.0);
  const auto j = static_cast<std::size_t>(std::floor((clamped + 1.0) / width));
  return std::min(j, bins - 1);
}

}  // namespace

ScalingFit scaling_regression(std::span<const EigenProfile> profiles, double bin_width_init) {
  if (profiles.size() < 3) throw DomainError("scaling regression needs at least three sizes");
  if (!(bin_width_init > 0.0)) throw DomainError("bin width must be positive");
  for (const EigenProfile& p : profiles) {
    if (std::none_of(p.records.begin(), p.records.end(),
                     [](const EigenRecord& r) { return !r.degenerate; })) {
      throw DomainError("profile without non-degenerate records");
    }
  }

  double width = bin_width_init;
  std::size_t bins = 0;
  std::vector<std::vector<double>> sums;
  std::vector<std::vector<std::size_t>> counts;
  for (;;) {
    bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 / width - 1e-9)));
    sums.assign(profiles.size(), std::vector<double>(bins, 0.0));
    counts.assign(profiles.size(), std::vector<std::size_t>(bins, 0));
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      for (const EigenRecord& r : profiles[p].records) {
        if (r.degenerate) continue;
        const std::size_t j = bin_index(r.energy_density, width, bins);
        sums[p][j] += r.entropy;
        ++counts[p][j];
      }
    }
    bool complete = true;
    for (const auto& c : counts) {
      complete = complete && std::all_of(c.begin(), c.end(), [](std::size_t k) { return k > 0; });
    }
    if (complete) break;
    width *= 2.0;
  }

  ScalingFit fit;
  fit.bin_width = width;
  for (std::size_t j = 0; j < bins; ++j) {
    ScalingBin bin;
    const double lo = -1.0 + static_cast<double>(j) * width;
    const double hi = std::min(1.0, lo + width);
    bin.center = 0.5 * (lo + hi);
    bin.width = hi - lo;
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      bin.sizes.push_back(profiles[p].n_sites);
      bin.mean_entropy.push_back(sums[p][j] / static_cast<double>(counts[p][j]));
      bin.counts.push_back(counts[p][j]);
      bin.n_points += counts[p][j];
    }
    const double m = static_cast<double>(profiles.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      mx += bin.sizes[p];
      my += bin.mean_entropy[p];
    }
    mx /= m;
    my /= m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      sxy += (bin.sizes[p] - mx) * (bin.mean_entropy[p] - my);
      sxx += (bin.sizes[p] - mx) * (bin.sizes[p] - mx);
    }
    if (sxx == 0.0) throw DomainError("scaling regression needs distinct sizes");
    bin.slope = sxy / sxx;
    bin.intercept = my - bin.slope * mx;
    double rss = 0.0;
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      const double r = bin.mean_entropy[p] - (bin.slope * bin.sizes[p] + bin.intercept);
      rss += r * r;
    }
    bin.residual_rms = std::sqrt(rss / m);
    fit.bins.push_back(std::move(bin));
  }
  return fit;
}

}  // namespace qachaos
