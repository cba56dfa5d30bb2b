#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qachaos/linalg.hpp"

namespace qachaos {

/// One term chi_ij sigma_i^z sigma_j^z of the problem Hamiltonian.
struct Coupling {
  int i = 0;
  int j = 0;
  double value = 0.0;

  friend bool operator==(const Coupling&, const Coupling&) = default;
};

/// Couplings and longitudinal fields of
///   H_P = sum chi_ij s^z_i s^z_j + sum lambda_i s^z_i,  H_M = sum s^x_i.
///
/// Coupling entries are summed as given; listing both (i,j) and (j,i) counts
/// the bond twice.
class HamiltonianSpec {
 public:
  HamiltonianSpec(int n_sites, std::vector<Coupling> couplings, std::vector<double> fields);

  // Open chain with chi_{i,i+1} = coupling and lambda_i = field.
  static HamiltonianSpec nearest_neighbor(int n_sites, double coupling = 1.0, double field = 1.0);

  int n_sites() const noexcept { return n_sites_; }
  const std::vector<Coupling>& couplings() const noexcept { return couplings_; }
  const std::vector<double>& fields() const noexcept { return fields_; }

  // Invariance under site i -> N-1-i.
  bool is_reflection_symmetric(double tol = 1e-12) const;

  friend bool operator==(const HamiltonianSpec&, const HamiltonianSpec&) = default;

 private:
  int n_sites_;
  std::vector<Coupling> couplings_;
  std::vector<double> fields_;
};

// {"n_sites": N, "couplings": [[i, j, value], ...], "fields": [...]}.
// Missing couplings or fields fall back to the nearest-neighbor, lambda = 1 chain.
std::string spec_to_json(const HamiltonianSpec& spec);
HamiltonianSpec spec_from_json(std::string_view text);

// Basis index convention: site 0 is the most significant bit and bit value 0
// means z = +1, so |0...0> carries the largest field energy sum lambda_i.
RealVector problem_diagonal(const HamiltonianSpec& spec);

RealMatrix mixer_hamiltonian(const HamiltonianSpec& spec);
RealMatrix problem_hamiltonian(const HamiltonianSpec& spec);
// H(s) = (1 - s) H_M + s H_P, so s = 0 is the mixer and s = 1 the problem.
RealMatrix interpolated_hamiltonian(const HamiltonianSpec& spec, double s);

std::uint64_t reflect_index(std::uint64_t index, int n_sites);
RealMatrix reflection_operator(int n_sites);

/// Eigenspace of the chain reflection with eigenvalue `sign`.
///
/// Basis vector j is |rep_j> when rep_j is a palindrome (positive sector
/// only), otherwise (|rep_j> + sign |partner_j>) / sqrt(2) with rep_j < partner_j.
class ParitySector {
 public:
  struct Orbit {
    std::uint64_t rep;
    std::uint64_t partner;
  };

  ParitySector(int n_sites, int sign);

  int n_sites() const noexcept { return n_sites_; }
  int sign() const noexcept { return sign_; }
  Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(orbits_.size()); }
  const std::vector<Orbit>& orbits() const noexcept { return orbits_; }

  // Sector column holding full-space basis state `index` and its amplitude
  // there; column -1 when the state has no weight in this sector.
  Eigen::Index column_of(std::uint64_t index) const { return column_[index]; }
  double amplitude_of(std::uint64_t index) const { return amplitude_[index]; }

  RealMatrix basis() const;                   // 2^N x dim, orthonormal columns
  Vector embed(const Vector& sector_state) const;
  Vector project(const Vector& full_state) const;

 private:
  int n_sites_;
  int sign_;
  std::vector<Orbit> orbits_;
  std::vector<Eigen::Index> column_;
  std::vector<double> amplitude_;
};

// (2^N + 2^ceil(N/2)) / 2 for sign +1, the remainder for sign -1.
Eigen::Index parity_sector_dim(int n_sites, int sign);

// Throws SymmetryError unless the spec is reflection symmetric.
ParitySector parity_sector(const HamiltonianSpec& spec, int sign);

// B^T op B; throws SymmetryError if op does not commute with the reflection.
Matrix restrict(const Matrix& op, const ParitySector& sector);
RealMatrix restrict(const RealMatrix& op, const ParitySector& sector);

/// H_M and H_P in either a parity sector or the full space, cheap to
/// interpolate for many values of s.
class ProjectedHamiltonian {
 public:
  ProjectedHamiltonian(const HamiltonianSpec& spec, std::optional<ParitySector> sector);

  Eigen::Index dim() const noexcept { return problem_.size(); }
  const std::optional<ParitySector>& sector() const noexcept { return sector_; }
  const RealMatrix& mixer() const noexcept { return mixer_; }
  // H_P is diagonal in the sector basis as well.
  const RealVector& problem() const noexcept { return problem_; }

  RealMatrix at(double s) const;
  RealMatrix derivative() const;  // dH/ds = H_P - H_M

 private:
  std::optional<ParitySector> sector_;
  RealMatrix mixer_;
  RealVector problem_;
};

}  // namespace qachaos
