#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qachaos/linalg.hpp"

namespace qachaos {

// Full 4^N projections are only attempted up to this many sites.
inline constexpr int kMaxPauliSites = 7;

enum class PauliAxis { kX, kY, kZ };

/// N-site Pauli product stored as two bit masks with Y = iXZ.
///
/// Masks use computational-basis bit order: site 0 is the most significant
/// bit of a basis index, so site i lives at bit (N - 1 - i). The string form
/// lists site 0 first, e.g. "XIZ".
class PauliString {
 public:
  PauliString(int n_sites, std::uint64_t x_mask, std::uint64_t z_mask);

  static PauliString identity(int n_sites);
  static PauliString single(int n_sites, int site, PauliAxis axis);
  static PauliString parse(std::string_view text);
  // Inverse of index(): index = (x_mask << N) | z_mask.
  static PauliString from_index(int n_sites, std::uint64_t index);

  int n_sites() const noexcept { return n_sites_; }
  std::uint64_t x_mask() const noexcept { return x_mask_; }
  std::uint64_t z_mask() const noexcept { return z_mask_; }
  std::uint64_t index() const noexcept { return (x_mask_ << n_sites_) | z_mask_; }

  // Hamming weight: number of non-identity sites.
  int size() const noexcept { return popcount(x_mask_ | z_mask_); }
  bool is_identity() const noexcept { return (x_mask_ | z_mask_) == 0; }

  char op_at(int site) const;
  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int n_sites_;
  std::uint64_t x_mask_;
  std::uint64_t z_mask_;
};

inline std::uint64_t site_bit(int n_sites, int site) {
  return std::uint64_t{1} << (n_sites - 1 - site);
}

Matrix pauli_matrix(const PauliString& p);

// S_axis = (1/2) sum_i sigma_i^axis.
Matrix collective_spin(PauliAxis axis, int n_sites);

// tr(Q A) / 2^N, the coefficient of Q in the orthonormal Pauli expansion of A.
Complex pauli_coefficient(const Matrix& a, const PauliString& q);

// All 4^N coefficients tr(Q A) / 2^N indexed by PauliString::index().
std::vector<Complex> pauli_decomposition(const Matrix& a, int n_sites);

}  // namespace qachaos
