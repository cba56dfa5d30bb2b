#include "qachaos/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "qachaos/errors.hpp"

namespace qachaos {
namespace {

void check_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols) {
    throw DimensionError(std::string(what) + ": matrix is not square");
  }
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw EigenSolverError(std::string(routine) + " failed with info=" + std::to_string(info));
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(RealMatrix a, bool with_vectors) {
  check_square(a.rows(), a.cols(), "symmetric_eigen");
  const auto n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'L', n,
                                         a.data(), n, out.values.data());
  check_info(info, "dsyevd");
  if (with_vectors) out.vectors = std::move(a);
  return out;
}

HermitianEigen hermitian_eigen(Matrix a, bool with_vectors) {
  check_square(a.rows(), a.cols(), "hermitian_eigen");
  const auto n = static_cast<lapack_int>(a.rows());
  HermitianEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'L', n,
                                         a.data(), n, out.values.data());
  check_info(info, "zheevd");
  if (with_vectors) out.vectors = std::move(a);
  return out;
}

UnitaryEigen unitary_eigen(Matrix u, bool with_vectors) {
  check_square(u.rows(), u.cols(), "unitary_eigen");
  const auto n = static_cast<lapack_int>(u.rows());
  UnitaryEigen out;
  if (n == 0) return out;

  // For a normal matrix the Schur form is diagonal and the Schur vectors are
  // an orthonormal eigenbasis, including inside degenerate clusters.
  Vector eigenvalues(n);
  Matrix schur_vectors(with_vectors ? n : 1, with_vectors ? n : 1);
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_zgees(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'N', nullptr, n, u.data(), n,
                    &sdim, eigenvalues.data(), schur_vectors.data(), with_vectors ? n : 1);
  check_info(info, "zgees");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  RealVector phases(n);
  for (lapack_int l = 0; l < n; ++l) {
    double mu = -std::arg(eigenvalues(l));
    if (mu < 0.0) mu += two_pi;
    if (mu >= two_pi) mu -= two_pi;
    phases(l) = mu;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return phases(a) < phases(b); });

  out.phases.resize(n);
  for (lapack_int l = 0; l < n; ++l) out.phases(l) = phases(order[static_cast<std::size_t>(l)]);
  if (with_vectors) {
    out.vectors.resize(n, n);
    for (lapack_int l = 0; l < n; ++l) {
      out.vectors.col(l) = schur_vectors.col(order[static_cast<std::size_t>(l)]);
    }
  }
  return out;
}

Matrix expm_hermitian(const Matrix& h, double dt) {
  const HermitianEigen eig = hermitian_eigen(h, true);
  Vector phase(eig.values.size());
  for (Eigen::Index i = 0; i < phase.size(); ++i) {
    phase(i) = std::polar(1.0, -dt * eig.values(i));
  }
  return eig.vectors * phase.asDiagonal() * eig.vectors.adjoint();
}

Matrix expm_symmetric(const RealMatrix& h, double dt) {
  const SymmetricEigen eig = symmetric_eigen(h, true);
  const Eigen::Index n = eig.values.size();
  RealVector c(n), s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i) = std::cos(dt * eig.values(i));
    s(i) = std::sin(dt * eig.values(i));
  }
  const RealMatrix re = eig.vectors * c.asDiagonal() * eig.vectors.transpose();
  const RealMatrix im = eig.vectors * s.asDiagonal() * eig.vectors.transpose();
  Matrix out(n, n);
  out.real() = re;
  out.imag() = -im;
  return out;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const Matrix& a) { return max_abs(a - a.adjoint()); }

double unitarity_defect(const Matrix& u) {
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

}  // namespace qachaos
