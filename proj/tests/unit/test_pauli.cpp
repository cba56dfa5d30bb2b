#include <doctest.h>

#include <random>

#include "qachaos/errors.hpp"
#include "qachaos/pauli.hpp"

using namespace qachaos;

namespace {

Matrix random_matrix(Eigen::Index d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  return a;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("single-qubit X") {
  const Matrix x = pauli_matrix(PauliString::single(1, 0, PauliAxis::kX));
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  CHECK(max_abs(x - expected) == 0.0);
}

TEST_CASE("string weight and parsing") {
  const PauliString q = PauliString::parse("XIZ");
  CHECK(q.size() == 2);
  CHECK(q.to_string() == "XIZ");
  CHECK(q.op_at(0) == 'X');
  CHECK(q.op_at(1) == 'I');
  CHECK(PauliString::from_index(3, q.index()) == q);
  CHECK_THROWS_AS(PauliString::parse("XQ"), DomainError);
}

TEST_CASE("ZZ is diagonal (+1, -1, -1, +1)") {
  const Matrix zz = pauli_matrix(PauliString::parse("ZZ"));
  CHECK(zz.diagonal().real().isApprox(Eigen::Vector4d(1, -1, -1, 1)));
  CHECK(max_abs(zz - Matrix(zz.diagonal().asDiagonal())) == 0.0);
}

TEST_CASE("site 0 is the leftmost tensor factor") {
  Matrix x(2, 2), z(2, 2), y(2, 2), id = Matrix::Identity(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  CHECK(max_abs(pauli_matrix(PauliString::parse("XIZ")) - kron(kron(x, id), z)) < 1e-15);
  CHECK(max_abs(pauli_matrix(PauliString::parse("YZ")) - kron(y, z)) < 1e-15);
}

TEST_CASE("collective spin") {
  const Matrix sz = collective_spin(PauliAxis::kZ, 1);
  CHECK(sz(0, 0).real() == doctest::Approx(0.5));
  CHECK(sz(1, 1).real() == doctest::Approx(-0.5));

  // N = 2 S_x eigenvalues {-1, 0, 0, 1}.
  const Eigen::SelfAdjointEigenSolver<Matrix> es(collective_spin(PauliAxis::kX, 2));
  const Eigen::Vector4d expected(-1, 0, 0, 1);
  CHECK((es.eigenvalues() - expected).cwiseAbs().maxCoeff() < 1e-12);

  CHECK(std::abs(collective_spin(PauliAxis::kY, 3).trace()) < 1e-15);
}

TEST_CASE("commutation [S_x, S_y] = i S_z") {
  for (int n : {1, 2, 3}) {
    const Matrix sx = collective_spin(PauliAxis::kX, n);
    const Matrix sy = collective_spin(PauliAxis::kY, n);
    const Matrix sz = collective_spin(PauliAxis::kZ, n);
    CHECK(max_abs(sx * sy - sy * sx - Complex(0, 1) * sz) < 1e-13);
  }
}

TEST_CASE("coefficient examples") {
  const PauliString q = PauliString::parse("XYZ");
  CHECK(std::abs(pauli_coefficient(pauli_matrix(q), q) - 1.0) < 1e-14);
  const Matrix id = Matrix::Identity(8, 8);
  CHECK(std::abs(pauli_coefficient(id, q)) < 1e-15);
  const Complex c = pauli_coefficient(collective_spin(PauliAxis::kZ, 2), PauliString::parse("ZI"));
  CHECK(c.real() == doctest::Approx(0.5));
  CHECK(std::abs(c.imag()) < 1e-15);
}

TEST_CASE("Pauli strings are orthonormal") {
  const int n = 2;
  for (std::uint64_t a = 0; a < 16; ++a) {
    const Matrix pa = pauli_matrix(PauliString::from_index(n, a));
    CHECK(unitarity_defect(pa) < 1e-15);
    CHECK(hermiticity_defect(pa) < 1e-15);
    for (std::uint64_t b = 0; b < 16; ++b) {
      const Complex c = pauli_coefficient(pa, PauliString::from_index(n, b));
      CHECK(std::abs(c - (a == b ? 1.0 : 0.0)) < 1e-14);
    }
  }
}

TEST_CASE("decomposition matches direct traces and reconstructs the operator") {
  for (int n : {1, 2, 3, 4}) {
    const Eigen::Index d = Eigen::Index{1} << n;
    const Matrix a = random_matrix(d, 7 + n);
    const auto coeffs = pauli_decomposition(a, n);
    REQUIRE(coeffs.size() == static_cast<std::size_t>(d * d));
    Matrix rebuilt = Matrix::Zero(d, d);
    for (std::uint64_t k = 0; k < coeffs.size(); ++k) {
      const PauliString q = PauliString::from_index(n, k);
      CHECK(std::abs(coeffs[k] - pauli_coefficient(a, q)) < 1e-12);
      rebuilt += coeffs[k] * pauli_matrix(q);
    }
    CHECK(max_abs(rebuilt - a) < 1e-12);
  }
}

TEST_CASE("decomposition rejects mismatched sizes") {
  CHECK_THROWS_AS(pauli_decomposition(Matrix::Identity(4, 4), 3), DimensionError);
  CHECK_THROWS_AS(pauli_decomposition(Matrix::Identity(256, 256), 8), CapacityError);
}
