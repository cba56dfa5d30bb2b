#include "qachaos/random_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qachaos/errors.hpp"

namespace qachaos {

RealMatrix sample_goe(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw DomainError("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix a(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) a(i, j) = normal(rng);
  }
  return 0.5 * (a + a.transpose());
}

Matrix sample_haar_unitary(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw DomainError("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  Matrix z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase freedom of QR so the distribution is exactly Haar.
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

Matrix sample_coe(Eigen::Index dim, std::uint64_t seed) {
  const Matrix u = sample_haar_unitary(dim, seed);
  return u.transpose() * u;
}

RealVector sample_poisson_levels(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw DomainError("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  RealVector e(dim);
  for (Eigen::Index i = 0; i < dim; ++i) e(i) = uniform(rng);
  std::sort(e.data(), e.data() + dim);
  return e;
}

}  // namespace qachaos
