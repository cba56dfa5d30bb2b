#pragma once

#include <cstdint>

#include "qachaos/linalg.hpp"

namespace qachaos {

// (A + A^T) / 2 with i.i.d. standard normal A.
RealMatrix sample_goe(Eigen::Index dim, std::uint64_t seed);

// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
Matrix sample_haar_unitary(Eigen::Index dim, std::uint64_t seed);

// U^T U with U Haar-random.
Matrix sample_coe(Eigen::Index dim, std::uint64_t seed);

// Sorted i.i.d. uniform levels on [0, 1).
RealVector sample_poisson_levels(Eigen::Index dim, std::uint64_t seed);

}  // namespace qachaos
