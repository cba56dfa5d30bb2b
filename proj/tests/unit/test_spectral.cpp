#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qachaos/errors.hpp"
#include "qachaos/model.hpp"
#include "qachaos/random_matrix.hpp"
#include "qachaos/spectral.hpp"

using namespace qachaos;

TEST_CASE("level spacings") {
  const std::vector<double> v{0, 1, 3};
  CHECK(level_spacings(v) == std::vector<double>{1, 2});
  const std::vector<double> ladder{0, 0.5, 1.0, 1.5, 2.0};
  for (double g : level_spacings(ladder)) CHECK(g == doctest::Approx(0.5));
  const std::vector<double> unsorted{0, 2, 1};
  CHECK_THROWS_AS(level_spacings(unsorted), DomainError);
}

TEST_CASE("mixer spectrum gaps for N = 3") {
  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(
      mixer_hamiltonian(HamiltonianSpec::nearest_neighbor(3)));
  const RealVector& e = es.eigenvalues();
  const auto gaps = level_spacings(std::vector<double>(e.data(), e.data() + e.size()));
  const std::vector<double> expected{2, 0, 0, 2, 0, 0, 2};
  for (std::size_t k = 0; k < gaps.size(); ++k) CHECK(std::abs(gaps[k] - expected[k]) < 1e-12);
}

TEST_CASE("spacing ratios") {
  CHECK(spacing_ratios(std::vector<double>{1, 2}, 1e-12).ratios[0] == doctest::Approx(0.5));
  CHECK(spacing_ratios(std::vector<double>{2, 2}, 1e-12).ratios[0] == doctest::Approx(1.0));
  const auto r = spacing_ratios(std::vector<double>{1, 0, 2, 3}, 1e-12);
  CHECK(r.skipped == 2);
  REQUIRE(r.ratios.size() == 1);
  CHECK(r.ratios[0] == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(spacing_ratios(std::vector<double>{0, 0}, 1e-12), EmptyStatisticsError);
}

TEST_CASE("Poisson gaps give 0.386") {
  // For i.i.d. exponential gaps <r> = 2 ln 2 - 1.
  std::mt19937_64 rng(11);
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> gaps(400000);
  for (double& g : gaps) g = exp1(rng);
  const auto r = spacing_ratios(gaps, 0.0);
  double mean = 0;
  for (double x : r.ratios) mean += x;
  mean /= static_cast<double>(r.ratios.size());
  CHECK(mean == doctest::Approx(2 * std::numbers::ln2 - 1).epsilon(0.005));
  CHECK(mean == doctest::Approx(kMlsrPoisson).epsilon(0.01));
}

TEST_CASE("GOE and uniform-diagonal references") {
  CHECK(std::abs(mlsr_hermitian(sample_goe(2000, 3)) - kMlsrGoe) < 0.01);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealMatrix diag = RealMatrix::Zero(3000, 3000);
  for (int i = 0; i < 3000; ++i) diag(i, i) = u(rng);
  CHECK(std::abs(mlsr_hermitian(diag) - kMlsrPoisson) < 0.01);
}

TEST_CASE("bulk trimming drops edge levels") {
  std::vector<double> values(100);
  for (int i = 0; i < 100; ++i) values[i] = i * i;
  const auto stats = hermitian_level_statistics(values, 0.05);
  CHECK(stats.values.size() == 90);
  CHECK(stats.values.front() == 25.0);
  CHECK_THROWS(hermitian_level_statistics(std::vector<double>(values.begin(), values.begin() + 9), 0.0));
}

TEST_CASE("phase statistics") {
  const double pi = std::numbers::pi;
  const auto s = phase_level_statistics(std::vector<double>{0, pi / 2, pi, 3 * pi / 2});
  REQUIRE(s.ratios.size() == 4);
  for (double r : s.ratios) CHECK(r == doctest::Approx(1.0));

  CHECK(std::abs(mlsr_unitary(sample_coe(1200, 9)) - kMlsrCoe) < 0.01);

  // exp(-i diag(Poisson ladder)) with phases spread over many windings.
  const RealVector levels = sample_poisson_levels(4000, 21);
  Matrix u = Matrix::Zero(4000, 4000);
  for (int i = 0; i < 4000; ++i) u(i, i) = std::exp(Complex(0, -levels(i)));
  CHECK(std::abs(mlsr_unitary(u) - kMlsrPoisson) < 0.02);
}

TEST_CASE("sector spectrum is chaotic at s = 0.5, N = 12") {
  const std::vector<double> grid{0.5};
  const auto pts = mlsr_sweep(HamiltonianSpec::nearest_neighbor(12), grid, 1);
  CHECK(std::abs(pts[0].mlsr - 0.53) <= 0.02);
}

TEST_CASE("gaps") {
  const std::vector<double> grid{0.0, 0.5};
  const auto g = gap_profile(HamiltonianSpec::nearest_neighbor(6), grid, 1);
  CHECK(g[0].ground_gap == doctest::Approx(2.0).epsilon(1e-12));
  // (e_max - e_0) / (d - 1) at s = 0 is 2N / (d - 1).
  CHECK(g[0].average_gap == doctest::Approx(12.0 / (parity_sector_dim(6, 1) - 1)).epsilon(1e-12));
  CHECK(g[1].ground_gap > 0.0);
}

TEST_CASE("adiabatic bound") {
  const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
  SUBCASE("zero numerator") {
    // One site, no field: H(s) = (1 - s) X keeps its eigenvectors, so every
    // matrix element of dH/ds between levels vanishes.
    const HamiltonianSpec spec(1, {}, {0.0});
    CHECK(adiabatic_time_bound(spec, grid, 0, AdiabaticGap::kAllLevels) == doctest::Approx(0.0));
  }
  SUBCASE("two-level closed form") {
    // H(s) = (1 - s) X + s Z = h.sigma has levels +-E with E = |h|. For
    // H' = Z - X the off-diagonal element is |h x h'| / E = 1 / E, so the
    // bound is (1 / E) / (2E)^2.
    const HamiltonianSpec spec(1, {}, {1.0});
    const std::vector<double> mid{0.5};
    const double e = std::sqrt(0.5);
    CHECK(adiabatic_time_bound(spec, mid, 0) == doctest::Approx(1.0 / (4 * e * e * e)).epsilon(1e-10));
    CHECK(1.0 / (4 * e * e * e) == doctest::Approx(0.7071067811865476));
  }
  SUBCASE("default chain, N = 8, ground state") {
    const double bound = adiabatic_time_bound(HamiltonianSpec::nearest_neighbor(8), grid, 0);
    CHECK(std::isfinite(bound));
    CHECK(bound > 0.0);
  }
}
