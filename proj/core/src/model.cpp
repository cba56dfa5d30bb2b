#include "qachaos/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "json_support.hpp"
#include "qachaos/errors.hpp"
#include "qachaos/pauli.hpp"

namespace qachaos {
namespace {

void check_dense_capacity(int n_sites) {
  if (n_sites > kMaxDenseSites) {
    throw CapacityError("dense operators support at most " + std::to_string(kMaxDenseSites) +
                        " sites, got " + std::to_string(n_sites));
  }
}

std::map<std::pair<int, int>, double> canonical_bonds(const std::vector<Coupling>& couplings,
                                                      int n_sites, bool reflected) {
  std::map<std::pair<int, int>, double> bonds;
  for (const Coupling& c : couplings) {
    int i = reflected ? n_sites - 1 - c.i : c.i;
    int j = reflected ? n_sites - 1 - c.j : c.j;
    if (i > j) std::swap(i, j);
    bonds[{i, j}] += c.value;
  }
  return bonds;
}

}  // namespace

HamiltonianSpec::HamiltonianSpec(int n_sites, std::vector<Coupling> couplings,
                                 std::vector<double> fields)
    : n_sites_(n_sites), couplings_(std::move(couplings)), fields_(std::move(fields)) {
  if (n_sites_ < 1) throw DomainError("n_sites must be positive");
  if (n_sites_ > 30) throw CapacityError("n_sites beyond 30 cannot be indexed");
  if (static_cast<int>(fields_.size()) != n_sites_) {
    throw DomainError("fields must have n_sites entries");
  }
  for (const Coupling& c : couplings_) {
    if (c.i < 0 || c.i >= n_sites_ || c.j < 0 || c.j >= n_sites_) {
      throw DomainError("coupling index out of range");
    }
    if (c.i == c.j) throw DomainError("coupling on the diagonal (i == j)");
    if (!std::isfinite(c.value)) throw DomainError("coupling value is not finite");
  }
  for (double f : fields_) {
    if (!std::isfinite(f)) throw DomainError("field value is not finite");
  }
}

HamiltonianSpec HamiltonianSpec::nearest_neighbor(int n_sites, double coupling, double field) {
  if (n_sites < 1) throw DomainError("n_sites must be positive");
  std::vector<Coupling> couplings;
  for (int i = 0; i + 1 < n_sites; ++i) couplings.push_back({i, i + 1, coupling});
  return HamiltonianSpec(n_sites, std::move(couplings),
                         std::vector<double>(static_cast<std::size_t>(n_sites), field));
}

bool HamiltonianSpec::is_reflection_symmetric(double tol) const {
  for (int i = 0; i < n_sites_; ++i) {
    if (std::abs(fields_[static_cast<std::size_t>(i)] -
                 fields_[static_cast<std::size_t>(n_sites_ - 1 - i)]) > tol) {
      return false;
    }
  }
  auto bonds = canonical_bonds(couplings_, n_sites_, false);
  auto mirrored = canonical_bonds(couplings_, n_sites_, true);
  for (const auto& [key, value] : bonds) {
    auto it = mirrored.find(key);
    const double other = it == mirrored.end() ? 0.0 : it->second;
    if (std::abs(value - other) > tol) return false;
  }
  for (const auto& [key, value] : mirrored) {
    if (!bonds.contains(key) && std::abs(value) > tol) return false;
  }
  return true;
}

namespace detail {

nlohmann::json spec_to_json_value(const HamiltonianSpec& spec) {
  nlohmann::json couplings = nlohmann::json::array();
  for (const Coupling& c : spec.couplings()) couplings.push_back({c.i, c.j, c.value});
  return {{"n_sites", spec.n_sites()}, {"couplings", couplings}, {"fields", spec.fields()}};
}

HamiltonianSpec spec_from_json_value(const nlohmann::json& value, const std::string& path) {
  if (!value.is_object()) throw ConfigError(path, "expected an object");
  if (!value.contains("n_sites") || !value["n_sites"].is_number_integer()) {
    throw ConfigError(path + ".n_sites", "required integer");
  }
  const int n = value["n_sites"].get<int>();
  if (n < 1) throw ConfigError(path + ".n_sites", "must be positive");

  std::vector<Coupling> couplings;
  if (value.contains("couplings")) {
    const auto& list = value["couplings"];
    if (!list.is_array()) throw ConfigError(path + ".couplings", "expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto& entry = list[k];
      const std::string where = path + ".couplings[" + std::to_string(k) + "]";
      if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
          !entry[1].is_number_integer() || !entry[2].is_number()) {
        throw ConfigError(where, "expected [i, j, value]");
      }
      couplings.push_back({entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>()});
    }
  } else {
    for (int i = 0; i + 1 < n; ++i) couplings.push_back({i, i + 1, 1.0});
  }

  std::vector<double> fields(static_cast<std::size_t>(n), 1.0);
  if (value.contains("fields")) {
    const auto& list = value["fields"];
    if (!list.is_array() || static_cast<int>(list.size()) != n) {
      throw ConfigError(path + ".fields", "expected an array of n_sites numbers");
    }
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (!list[k].is_number()) {
        throw ConfigError(path + ".fields[" + std::to_string(k) + "]", "expected a number");
      }
      fields[k] = list[k].get<double>();
    }
  }
  try {
    return HamiltonianSpec(n, std::move(couplings), std::move(fields));
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace detail

std::string spec_to_json(const HamiltonianSpec& spec) {
  return detail::spec_to_json_value(spec).dump();
}

HamiltonianSpec spec_from_json(std::string_view text) {
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("$", e.what());
  }
  return detail::spec_from_json_value(value, "$");
}

RealVector problem_diagonal(const HamiltonianSpec& spec) {
  const int n = spec.n_sites();
  if (n > 26) throw CapacityError("problem diagonal limited to 26 sites");
  const std::uint64_t dim = std::uint64_t{1} << n;
  RealVector diag(static_cast<Eigen::Index>(dim));
  auto z = [n](std::uint64_t b, int site) {
    return ((b >> (n - 1 - site)) & 1U) ? -1.0 : 1.0;
  };
  for (std::uint64_t b = 0; b < dim; ++b) {
    double e = 0.0;
    for (const Coupling& c : spec.couplings()) e += c.value * z(b, c.i) * z(b, c.j);
    for (int i = 0; i < n; ++i) e += spec.fields()[static_cast<std::size_t>(i)] * z(b, i);
    diag(static_cast<Eigen::Index>(b)) = e;
  }
  return diag;
}

RealMatrix mixer_hamiltonian(const HamiltonianSpec& spec) {
  const int n = spec.n_sites();
  check_dense_capacity(n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  RealMatrix h = RealMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    for (int site = 0; site < n; ++site) {
      h(static_cast<Eigen::Index>(b ^ site_bit(n, site)), static_cast<Eigen::Index>(b)) = 1.0;
    }
  }
  return h;
}

RealMatrix problem_hamiltonian(const HamiltonianSpec& spec) {
  check_dense_capacity(spec.n_sites());
  return problem_diagonal(spec).asDiagonal();
}

RealMatrix interpolated_hamiltonian(const HamiltonianSpec& spec, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("interpolation parameter s must lie in [0, 1]");
  return (1.0 - s) * mixer_hamiltonian(spec) + s * problem_hamiltonian(spec);
}

std::uint64_t reflect_index(std::uint64_t index, int n_sites) {
  std::uint64_t out = 0;
  for (int k = 0; k < n_sites; ++k) {
    out = (out << 1) | ((index >> k) & 1U);
  }
  return out;
}

RealMatrix reflection_operator(int n_sites) {
  check_dense_capacity(n_sites);
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  RealMatrix r = RealMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    r(static_cast<Eigen::Index>(reflect_index(b, n_sites)), static_cast<Eigen::Index>(b)) = 1.0;
  }
  return r;
}

Eigen::Index parity_sector_dim(int n_sites, int sign) {
  const Eigen::Index full = Eigen::Index{1} << n_sites;
  const Eigen::Index palindromes = Eigen::Index{1} << ((n_sites + 1) / 2);
  const Eigen::Index plus = (full + palindromes) / 2;
  return sign > 0 ? plus : full - plus;
}

ParitySector::ParitySector(int n_sites, int sign) : n_sites_(n_sites), sign_(sign) {
  if (sign != 1 && sign != -1) throw DomainError("parity sign must be +1 or -1");
  if (n_sites < 1) throw DomainError("n_sites must be positive");
  if (n_sites > 26) throw CapacityError("parity sector limited to 26 sites");
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  column_.assign(dim, -1);
  amplitude_.assign(dim, 0.0);
  orbits_.reserve(static_cast<std::size_t>(parity_sector_dim(n_sites, sign)));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::uint64_t b = 0; b < dim; ++b) {
    const std::uint64_t r = reflect_index(b, n_sites);
    if (r < b) continue;
    if (r == b) {
      if (sign < 0) continue;
      column_[b] = static_cast<Eigen::Index>(orbits_.size());
      amplitude_[b] = 1.0;
    } else {
      column_[b] = column_[r] = static_cast<Eigen::Index>(orbits_.size());
      amplitude_[b] = inv_sqrt2;
      amplitude_[r] = sign * inv_sqrt2;
    }
    orbits_.push_back({b, r});
  }
}

RealMatrix ParitySector::basis() const {
  const Eigen::Index full = Eigen::Index{1} << n_sites_;
  RealMatrix b = RealMatrix::Zero(full, dim());
  for (Eigen::Index j = 0; j < dim(); ++j) {
    const Orbit& o = orbits_[static_cast<std::size_t>(j)];
    b(static_cast<Eigen::Index>(o.rep), j) = amplitude_[o.rep];
    b(static_cast<Eigen::Index>(o.partner), j) = amplitude_[o.partner];
  }
  return b;
}

Vector ParitySector::embed(const Vector& sector_state) const {
  if (sector_state.size() != dim()) throw DimensionError("embed: state is not a sector vector");
  Vector full = Vector::Zero(Eigen::Index{1} << n_sites_);
  for (Eigen::Index j = 0; j < dim(); ++j) {
    const Orbit& o = orbits_[static_cast<std::size_t>(j)];
    full(static_cast<Eigen::Index>(o.rep)) = amplitude_[o.rep] * sector_state(j);
    full(static_cast<Eigen::Index>(o.partner)) = amplitude_[o.partner] * sector_state(j);
  }
  return full;
}

Vector ParitySector::project(const Vector& full_state) const {
  if (full_state.size() != (Eigen::Index{1} << n_sites_)) {
    throw DimensionError("project: state is not a full-space vector");
  }
  Vector out(dim());
  for (Eigen::Index j = 0; j < dim(); ++j) {
    const Orbit& o = orbits_[static_cast<std::size_t>(j)];
    if (o.rep == o.partner) {
      out(j) = full_state(static_cast<Eigen::Index>(o.rep));
    } else {
      out(j) = amplitude_[o.rep] * full_state(static_cast<Eigen::Index>(o.rep)) +
               amplitude_[o.partner] * full_state(static_cast<Eigen::Index>(o.partner));
    }
  }
  return out;
}

ParitySector parity_sector(const HamiltonianSpec& spec, int sign) {
  if (!spec.is_reflection_symmetric()) {
    throw SymmetryError("spec is not invariant under chain reflection");
  }
  return ParitySector(spec.n_sites(), sign);
}

namespace {

template <typename MatrixType>
MatrixType restrict_impl(const MatrixType& op, const ParitySector& sector) {
  const int n = sector.n_sites();
  const Eigen::Index full = Eigen::Index{1} << n;
  if (op.rows() != full || op.cols() != full) {
    throw DimensionError("restrict: operator is not a full-space matrix");
  }
  // [R, op] = 0  <=>  op(r(a), r(b)) == op(a, b)
  double scale = 1.0;
  if (op.size() > 0) scale = std::max(scale, op.cwiseAbs().maxCoeff());
  for (Eigen::Index b = 0; b < full; ++b) {
    const auto rb = static_cast<Eigen::Index>(reflect_index(static_cast<std::uint64_t>(b), n));
    for (Eigen::Index a = 0; a < full; ++a) {
      const auto ra = static_cast<Eigen::Index>(reflect_index(static_cast<std::uint64_t>(a), n));
      if (std::abs(op(ra, rb) - op(a, b)) > 1e-10 * scale) {
        throw SymmetryError("restrict: operator does not commute with the reflection");
      }
    }
  }
  const Eigen::Index d = sector.dim();
  MatrixType out(d, d);
  const auto& orbits = sector.orbits();
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& oj = orbits[static_cast<std::size_t>(j)];
    const std::uint64_t cols[2] = {oj.rep, oj.partner};
    const int ncols = oj.rep == oj.partner ? 1 : 2;
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& oi = orbits[static_cast<std::size_t>(i)];
      const std::uint64_t rows[2] = {oi.rep, oi.partner};
      const int nrows = oi.rep == oi.partner ? 1 : 2;
      typename MatrixType::Scalar acc(0);
      for (int p = 0; p < nrows; ++p) {
        for (int q = 0; q < ncols; ++q) {
          acc += sector.amplitude_of(rows[p]) * sector.amplitude_of(cols[q]) *
                 op(static_cast<Eigen::Index>(rows[p]), static_cast<Eigen::Index>(cols[q]));
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

Matrix restrict(const Matrix& op, const ParitySector& sector) { return restrict_impl(op, sector); }

RealMatrix restrict(const RealMatrix& op, const ParitySector& sector) {
  return restrict_impl(op, sector);
}

ProjectedHamiltonian::ProjectedHamiltonian(const HamiltonianSpec& spec,
                                           std::optional<ParitySector> sector)
    : sector_(std::move(sector)) {
  const int n = spec.n_sites();
  const RealVector diag = problem_diagonal(spec);
  if (!sector_) {
    check_dense_capacity(n);
    mixer_ = mixer_hamiltonian(spec);
    problem_ = diag;
    return;
  }
  if (sector_->n_sites() != n) throw DimensionError("sector built for a different chain length");
  if (!spec.is_reflection_symmetric()) {
    throw SymmetryError("spec is not invariant under chain reflection");
  }
  const Eigen::Index d = sector_->dim();
  mixer_ = RealMatrix::Zero(d, d);
  problem_.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& o = sector_->orbits()[static_cast<std::size_t>(j)];
    problem_(j) = diag(static_cast<Eigen::Index>(o.rep));
    const std::uint64_t members[2] = {o.rep, o.partner};
    const int count = o.rep == o.partner ? 1 : 2;
    for (int m = 0; m < count; ++m) {
      const std::uint64_t b = members[m];
      const double cb = sector_->amplitude_of(b);
      for (int site = 0; site < n; ++site) {
        const std::uint64_t a = b ^ site_bit(n, site);
        const Eigen::Index i = sector_->column_of(a);
        if (i < 0) continue;
        mixer_(i, j) += sector_->amplitude_of(a) * cb;
      }
    }
  }
}

RealMatrix ProjectedHamiltonian::at(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("interpolation parameter s must lie in [0, 1]");
  RealMatrix h = (1.0 - s) * mixer_;
  h.diagonal() += s * problem_;
  return h;
}

RealMatrix ProjectedHamiltonian::derivative() const {
  RealMatrix h = -mixer_;
  h.diagonal() += problem_;
  return h;
}

}  // namespace qachaos
