#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qachaos/errors.hpp"
#include "qachaos/model.hpp"

using namespace qachaos;

namespace {

std::vector<double> sorted_eigenvalues(const RealMatrix& h) {
  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + h.rows());
  return v;
}

}  // namespace

TEST_CASE("mixer") {
  RealMatrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(mixer_hamiltonian(HamiltonianSpec::nearest_neighbor(1)) == x);

  const auto ev = sorted_eigenvalues(mixer_hamiltonian(HamiltonianSpec::nearest_neighbor(2)));
  const std::vector<double> expected{-2, 0, 0, 2};
  for (int k = 0; k < 4; ++k) CHECK(ev[k] == doctest::Approx(expected[k]).epsilon(1e-12));

  // Ground state |->^N with eigenvalue -N.
  const int n = 5;
  const RealMatrix hm = mixer_hamiltonian(HamiltonianSpec::nearest_neighbor(n));
  RealVector minus(32);
  for (int b = 0; b < 32; ++b) minus(b) = (__builtin_popcount(b) % 2 ? -1.0 : 1.0) / std::sqrt(32.0);
  CHECK((hm * minus + n * minus).norm() < 1e-12);
}

TEST_CASE("problem Hamiltonian for two sites") {
  const RealMatrix hp = problem_hamiltonian(HamiltonianSpec::nearest_neighbor(2));
  // z0 z1 + z0 + z1 over |00>, |01>, |10>, |11>.
  CHECK(hp.diagonal().isApprox(Eigen::Vector4d(3, -1, -1, -1)));
  CHECK((hp - RealMatrix(hp.diagonal().asDiagonal())).norm() == 0.0);

  const HamiltonianSpec zero(3, {{0, 1, 0.0}}, {0.0, 0.0, 0.0});
  CHECK(problem_hamiltonian(zero).norm() == 0.0);
}

TEST_CASE("problem diagonal matches a direct evaluation") {
  // H_P = sum_{i<j} chi_ij z_i z_j + sum_i lambda_i z_i, site 0 most significant.
  const HamiltonianSpec spec(4, {{0, 1, 0.7}, {1, 2, -1.3}, {0, 3, 0.4}}, {0.2, -0.5, 1.1, 0.0});
  const RealVector diag = problem_diagonal(spec);
  for (int b = 0; b < 16; ++b) {
    auto z = [&](int site) { return (b >> (3 - site)) & 1 ? -1.0 : 1.0; };
    const double e = 0.7 * z(0) * z(1) - 1.3 * z(1) * z(2) + 0.4 * z(0) * z(3) + 0.2 * z(0) -
                     0.5 * z(1) + 1.1 * z(2);
    CHECK(diag(b) == doctest::Approx(e).epsilon(1e-14));
  }
}

TEST_CASE("interpolation endpoints") {
  const HamiltonianSpec spec = HamiltonianSpec::nearest_neighbor(4);
  const RealMatrix hm = mixer_hamiltonian(spec);
  const RealMatrix hp = problem_hamiltonian(spec);
  CHECK(interpolated_hamiltonian(spec, 0.0) == hm);
  CHECK(interpolated_hamiltonian(spec, 1.0) == hp);
  CHECK((interpolated_hamiltonian(spec, 0.5) - 0.5 * (hm + hp)).norm() < 1e-14);
  CHECK_THROWS_AS(interpolated_hamiltonian(spec, 1.5), DomainError);
}

TEST_CASE("sector dimensions") {
  CHECK(parity_sector_dim(2, 1) == 3);
  CHECK(parity_sector_dim(3, 1) == 6);
  CHECK(parity_sector_dim(14, 1) == 8256);
  for (int n = 1; n <= 12; ++n) {
    CHECK(parity_sector_dim(n, 1) + parity_sector_dim(n, -1) == (Eigen::Index{1} << n));
    CHECK(ParitySector(n, 1).dim() == parity_sector_dim(n, 1));
  }
}

TEST_CASE("N = 2 even sector basis") {
  const RealMatrix basis = ParitySector(2, 1).basis();
  REQUIRE(basis.cols() == 3);
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Vector4d> expected{{1, 0, 0, 0}, {0, 0, 0, 1}, {0, r, r, 0}};
  for (const auto& e : expected) {
    // Each expected vector lies in the span of the basis.
    const Eigen::Vector4d projected = basis * (basis.transpose() * e);
    CHECK((projected - e).norm() < 1e-14);
  }
}

TEST_CASE("projectors are idempotent, complementary and commute with H") {
  for (int n : {3, 4, 5}) {
    const HamiltonianSpec spec = HamiltonianSpec::nearest_neighbor(n);
    const Eigen::Index d = Eigen::Index{1} << n;
    const RealMatrix bp = ParitySector(n, 1).basis();
    const RealMatrix bm = ParitySector(n, -1).basis();
    const RealMatrix pp = bp * bp.transpose();
    const RealMatrix pm = bm * bm.transpose();
    CHECK((pp * pp - pp).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pp + pm - RealMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pp * pm).cwiseAbs().maxCoeff() < 1e-12);
    const RealMatrix r = reflection_operator(n);
    CHECK((r * pp - pp).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r * pm + pm).cwiseAbs().maxCoeff() < 1e-12);
    const RealMatrix h = interpolated_hamiltonian(spec, 0.37);
    CHECK((h * pp - pp * h).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((h * r - r * h).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("restriction") {
  const HamiltonianSpec spec = HamiltonianSpec::nearest_neighbor(2);
  const ParitySector plus = parity_sector(spec, 1);
  CHECK(restrict(RealMatrix(RealMatrix::Identity(4, 4)), plus).isIdentity(1e-15));

  const auto ev = sorted_eigenvalues(restrict(mixer_hamiltonian(spec), plus));
  REQUIRE(ev.size() == 3);
  CHECK(ev[0] == doctest::Approx(-2));
  CHECK(std::abs(ev[1]) < 1e-14);
  CHECK(ev[2] == doctest::Approx(2));

  // The two sectors together carry the full spectrum.
  const HamiltonianSpec spec6 = HamiltonianSpec::nearest_neighbor(6);
  const RealMatrix h = interpolated_hamiltonian(spec6, 0.41);
  auto both = sorted_eigenvalues(restrict(h, ParitySector(6, 1)));
  const auto minus = sorted_eigenvalues(restrict(h, ParitySector(6, -1)));
  both.insert(both.end(), minus.begin(), minus.end());
  std::sort(both.begin(), both.end());
  const auto full = sorted_eigenvalues(h);
  for (std::size_t k = 0; k < full.size(); ++k) CHECK(std::abs(both[k] - full[k]) < 1e-12);

  // An operator that breaks reflection symmetry cannot be restricted.
  RealMatrix z0 = RealMatrix::Zero(4, 4);
  z0.diagonal() << 1, 1, -1, -1;
  CHECK_THROWS_AS(restrict(z0, plus), SymmetryError);
}

TEST_CASE("embed and project are inverse on the sector") {
  const ParitySector sector(5, -1);
  Vector v = Vector::Random(sector.dim());
  const Vector full = sector.embed(v);
  CHECK((sector.project(full) - v).norm() < 1e-14);
  const RealMatrix r = reflection_operator(5);
  CHECK((r.cast<Complex>() * full + full).norm() < 1e-14);
}

TEST_CASE("projected Hamiltonian agrees with restricted dense H") {
  const HamiltonianSpec spec = HamiltonianSpec::nearest_neighbor(6);
  const ProjectedHamiltonian model(spec, parity_sector(spec, 1));
  const RealMatrix dense = restrict(interpolated_hamiltonian(spec, 0.3), ParitySector(6, 1));
  CHECK((model.at(0.3) - dense).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((model.derivative() - (model.at(1.0) - model.at(0.0))).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("asymmetric specs have no parity sector") {
  const HamiltonianSpec spec(3, {{0, 1, 1.0}}, {1.0, 1.0, 1.0});
  CHECK_FALSE(spec.is_reflection_symmetric());
  CHECK_THROWS_AS(parity_sector(spec, 1), SymmetryError);
}

TEST_CASE("spec JSON round trip and field-path errors") {
  const HamiltonianSpec spec(3, {{0, 1, 0.5}, {1, 2, 0.5}}, {1.0, -0.25, 1.0});
  CHECK(spec_from_json(spec_to_json(spec)) == spec);
  CHECK(spec_from_json(R"({"n_sites": 4})") == HamiltonianSpec::nearest_neighbor(4));
  try {
    spec_from_json(R"({"n_sites": 2, "fields": [1, "a"]})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "$.fields[1]");
  }
}
