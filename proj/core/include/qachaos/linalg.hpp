#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace qachaos {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Largest chain for which full-space dense operators are built.
inline constexpr int kMaxDenseSites = 16;

struct SymmetricEigen {
  RealVector values;   // ascending
  RealMatrix vectors;  // columns; empty when not requested
};

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;
};

// Spectral decomposition of a unitary U |v_l> = exp(-i phase_l) |v_l>.
struct UnitaryEigen {
  RealVector phases;  // in [0, 2pi), ascending
  Matrix vectors;     // orthonormal Schur vectors, ordered like `phases`
};

SymmetricEigen symmetric_eigen(RealMatrix a, bool with_vectors = true);
HermitianEigen hermitian_eigen(Matrix a, bool with_vectors = true);
UnitaryEigen unitary_eigen(Matrix u, bool with_vectors = true);

// exp(-i dt H) for Hermitian H, via eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double dt);
Matrix expm_symmetric(const RealMatrix& h, double dt);

double max_abs(const Matrix& a);
double hermiticity_defect(const Matrix& a);
double unitarity_defect(const Matrix& u);

inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

}  // namespace qachaos
