#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qachaos/errors.hpp"
#include "qachaos/model.hpp"
#include "qachaos/states.hpp"

using namespace qachaos;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

Vector random_state(Eigen::Index d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = {g(rng), g(rng)};
  return v.normalized();
}

// Reduced density matrix by explicit partial trace over the right block.
Matrix brute_force_rdm(const Vector& psi, int n, int cut) {
  const Eigen::Index da = Eigen::Index{1} << cut;
  const Eigen::Index db = Eigen::Index{1} << (n - cut);
  Matrix rho = Matrix::Zero(da, da);
  for (Eigen::Index a = 0; a < da; ++a)
    for (Eigen::Index ap = 0; ap < da; ++ap)
      for (Eigen::Index b = 0; b < db; ++b)
        rho(a, ap) += psi(a * db + b) * std::conj(psi(ap * db + b));
  return rho;
}

}  // namespace

TEST_CASE("coherent states") {
  const int n = 5;
  CHECK(mixer_expectation(spin_coherent_state(kPi / 2, 0.0, n).amplitudes, n) == doctest::Approx(n));
  CHECK(mixer_expectation(spin_coherent_state(kPi / 2, kPi, n).amplitudes, n) == doctest::Approx(-n));
  CHECK(std::abs(mixer_expectation(spin_coherent_state(kPi / 2, kPi / 2, n).amplitudes, n)) < 1e-12);
  for (double phi : {0.0, 0.4, 2.0}) {
    CHECK(mixer_expectation(spin_coherent_state(kPi / 2, phi, n).amplitudes, n) ==
          doctest::Approx(n * std::cos(phi)));
  }
  CHECK(spin_coherent_state(0.0, 1.0, 3).amplitudes(0) == Complex(1.0, 0.0));
  CHECK_THROWS_AS(spin_coherent_state(4.0, 0.0, 3), DomainError);
}

TEST_CASE("Dicke states") {
  for (int n : {3, 5, 8}) {
    const RealMatrix hm = mixer_hamiltonian(HamiltonianSpec::nearest_neighbor(n));
    for (int k = 0; k <= n; ++k) {
      const Vector d = dicke_state(k, n).amplitudes;
      CHECK(d.norm() == doctest::Approx(1.0));
      CHECK((hm.cast<Complex>() * d - double(2 * k - n) * d).norm() < 1e-12);
    }
    CHECK(fidelity(dicke_state(0, n).amplitudes, spin_coherent_state(kPi / 2, kPi, n).amplitudes) ==
          doctest::Approx(1.0));
  }
  // The W state splits 1 : 1 across a middle cut, so S_A = ln 2 for even N;
  // a cut of k sites gives weights k / N and (N - k) / N.
  for (int n : {2, 4, 8, 10}) {
    CHECK(half_chain_entropy(dicke_state(1, n).amplitudes, n) == doctest::Approx(kLn2).epsilon(1e-10));
  }
  const double p = 2.0 / 5.0;
  CHECK(half_chain_entropy(dicke_state(1, 5).amplitudes, 5) ==
        doctest::Approx(-p * std::log(p) - (1 - p) * std::log(1 - p)));
  const RealMatrix hm3 = mixer_hamiltonian(HamiltonianSpec::nearest_neighbor(3));
  const Vector d1 = dicke_state(1, 3).amplitudes;
  CHECK(d1.dot(hm3.cast<Complex>() * d1).real() == doctest::Approx(-1.0));
}

TEST_CASE("fidelity") {
  const Vector a = random_state(16, 1);
  CHECK(fidelity(a, a) == doctest::Approx(1.0));
  Vector e0 = Vector::Zero(4), e1 = Vector::Zero(4);
  e0(0) = 1;
  e1(3) = 1;
  CHECK(fidelity(e0, e1) == 0.0);
}

TEST_CASE("reduced density matrices") {
  const Vector product = spin_coherent_state(0.3, 1.2, 4).amplitudes;
  const Matrix rp = reduced_density_matrix(product, 4, 2);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(rp).eigenvalues().maxCoeff() == doctest::Approx(1.0));

  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK(reduced_density_matrix(bell, 2, 1).isApprox(0.5 * Matrix::Identity(2, 2)));

  const int n = 6;
  Vector ghz = Vector::Zero(64);
  ghz(0) = ghz(63) = 1.0 / std::sqrt(2.0);
  const Matrix rg = reduced_density_matrix(ghz, n, 3);
  CHECK(rg(0, 0).real() == doctest::Approx(0.5));
  CHECK(rg(7, 7).real() == doctest::Approx(0.5));
  CHECK(rg.cwiseAbs().sum() == doctest::Approx(1.0));

  const Vector psi = random_state(64, 4);
  for (int cut = 1; cut < n; ++cut) {
    CHECK(max_abs(reduced_density_matrix(psi, n, cut) - brute_force_rdm(psi, n, cut)) < 1e-14);
  }
}

TEST_CASE("entropies") {
  CHECK(entanglement_entropy(Matrix::Identity(1, 1)) == 0.0);
  CHECK(entanglement_entropy(0.5 * Matrix::Identity(2, 2)) == doctest::Approx(kLn2));
  CHECK_THROWS_AS(entanglement_entropy(Matrix::Identity(2, 2)), DomainError);

  // Schmidt symmetry S_A = S_B on both sides of every cut.
  for (int n : {5, 6, 7}) {
    const Vector psi = random_state(Eigen::Index{1} << n, 10 + n);
    for (int cut = 1; cut < n; ++cut) {
      const double sa = block_entropy(psi, n, cut);
      const double sa_rho = entanglement_entropy(reduced_density_matrix(psi, n, cut));
      CHECK(std::abs(sa - sa_rho) < 1e-9);
      // Reflecting the chain turns the right block into the left one.
      Vector reflected(psi.size());
      for (Eigen::Index b = 0; b < psi.size(); ++b) reflected(reflect_index(b, n)) = psi(b);
      CHECK(std::abs(sa - block_entropy(reflected, n, n - cut)) < 1e-9);
    }
  }
}

TEST_CASE("Page value") {
  CHECK(page_value(14) == doctest::Approx(7 * kLn2 - 0.5));
  CHECK(page_value(14) == doctest::Approx(4.352).epsilon(1e-3));
  CHECK(page_value(2) == doctest::Approx(0.193).epsilon(1e-2));
  for (int n = 2; n < 20; ++n) CHECK(page_value(n + 1) > page_value(n));
}

TEST_CASE("ground-manifold weight") {
  const HamiltonianSpec spec = HamiltonianSpec::nearest_neighbor(4);
  const RealVector diag = problem_diagonal(spec);
  Vector psi = Vector::Zero(16);
  const double e0 = diag.minCoeff();
  int count = 0;
  for (int b = 0; b < 16; ++b) count += diag(b) < e0 + 1e-9;
  for (int b = 0; b < 16; ++b) psi(b) = 0.25;
  CHECK(problem_ground_weight(psi, spec) == doctest::Approx(count / 16.0));
}

TEST_CASE("forward sweep endpoints, N = 10") {
  const int n = 10;
  const HamiltonianSpec spec = HamiltonianSpec::nearest_neighbor(n);
  const RampParams p(RampKind::kForward, RampParams::default_leg_time(n), 0.05);
  const std::vector<double> phis{0.0, kPi};
  const auto rec = scs_sweep(spec, p, phis);
  REQUIRE(rec.size() == 2);
  CHECK(rec[0].energy_density == doctest::Approx(1.0));
  CHECK(rec[0].entropy_final < 0.1);
  CHECK(std::abs(rec[1].entropy_final - kLn2) < 0.1);
  CHECK_FALSE(rec[0].fidelity.has_value());
}
