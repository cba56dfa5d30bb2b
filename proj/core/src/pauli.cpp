#include "qachaos/pauli.hpp"

#include <array>

#include "qachaos/errors.hpp"

namespace qachaos {
namespace {

constexpr std::array<Complex, 4> kIPowers = {Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                             Complex(0, -1)};

void check_sites(int n_sites, int capacity) {
  if (n_sites < 1) throw DomainError("Pauli string needs at least one site");
  if (n_sites > capacity) {
    throw CapacityError("n_sites=" + std::to_string(n_sites) + " exceeds capacity " +
                        std::to_string(capacity));
  }
}

std::uint64_t full_mask(int n_sites) { return (std::uint64_t{1} << n_sites) - 1; }

// In-place Walsh-Hadamard transform: w[z] = sum_c (-1)^{|z & c|} v[c].
void walsh_hadamard(std::vector<Complex>& v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const Complex a = v[j];
        const Complex b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

}  // namespace

PauliString::PauliString(int n_sites, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_sites_(n_sites), x_mask_(x_mask), z_mask_(z_mask) {
  check_sites(n_sites, 32);
  const std::uint64_t outside = ~full_mask(n_sites);
  if ((x_mask & outside) != 0 || (z_mask & outside) != 0) {
    throw DomainError("Pauli mask has bits beyond n_sites");
  }
}

PauliString PauliString::identity(int n_sites) { return PauliString(n_sites, 0, 0); }

PauliString PauliString::single(int n_sites, int site, PauliAxis axis) {
  check_sites(n_sites, 32);
  if (site < 0 || site >= n_sites) throw DomainError("site index out of range");
  const std::uint64_t bit = site_bit(n_sites, site);
  switch (axis) {
    case PauliAxis::kX:
      return PauliString(n_sites, bit, 0);
    case PauliAxis::kY:
      return PauliString(n_sites, bit, bit);
    case PauliAxis::kZ:
      return PauliString(n_sites, 0, bit);
  }
  throw DomainError("unknown Pauli axis");
}

PauliString PauliString::parse(std::string_view text) {
  const int n = static_cast<int>(text.size());
  check_sites(n, 32);
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (int site = 0; site < n; ++site) {
    const std::uint64_t bit = site_bit(n, site);
    switch (text[static_cast<std::size_t>(site)]) {
      case 'I':
        break;
      case 'X':
        x |= bit;
        break;
      case 'Y':
        x |= bit;
        z |= bit;
        break;
      case 'Z':
        z |= bit;
        break;
      default:
        throw DomainError("invalid Pauli character in '" + std::string(text) + "'");
    }
  }
  return PauliString(n, x, z);
}

PauliString PauliString::from_index(int n_sites, std::uint64_t index) {
  check_sites(n_sites, 31);
  const std::uint64_t mask = full_mask(n_sites);
  if ((index >> (2 * n_sites)) != 0) throw DomainError("Pauli index out of range");
  return PauliString(n_sites, (index >> n_sites) & mask, index & mask);
}

char PauliString::op_at(int site) const {
  if (site < 0 || site >= n_sites_) throw DomainError("site index out of range");
  const std::uint64_t bit = site_bit(n_sites_, site);
  const bool x = (x_mask_ & bit) != 0;
  const bool z = (z_mask_ & bit) != 0;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::to_string() const {
  std::string out(static_cast<std::size_t>(n_sites_), 'I');
  for (int site = 0; site < n_sites_; ++site) out[static_cast<std::size_t>(site)] = op_at(site);
  return out;
}

Matrix pauli_matrix(const PauliString& p) {
  check_sites(p.n_sites(), kMaxDenseSites);
  const std::uint64_t dim = std::uint64_t{1} << p.n_sites();
  const Complex prefactor = kIPowers[popcount(p.x_mask() & p.z_mask()) % 4];
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  // Q|c> = i^{n_y} (-1)^{|z & c|} |c ^ x>
  for (std::uint64_t c = 0; c < dim; ++c) {
    const double sign = (popcount(p.z_mask() & c) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(c ^ p.x_mask()), static_cast<Eigen::Index>(c)) = prefactor * sign;
  }
  return out;
}

Matrix collective_spin(PauliAxis axis, int n_sites) {
  check_sites(n_sites, kMaxDenseSites);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Matrix out = Matrix::Zero(dim, dim);
  for (int site = 0; site < n_sites; ++site) {
    out += pauli_matrix(PauliString::single(n_sites, site, axis));
  }
  return 0.5 * out;
}

Complex pauli_coefficient(const Matrix& a, const PauliString& q) {
  check_sites(q.n_sites(), kMaxDenseSites);
  const std::uint64_t dim = std::uint64_t{1} << q.n_sites();
  if (a.rows() != static_cast<Eigen::Index>(dim) || a.cols() != static_cast<Eigen::Index>(dim)) {
    throw DimensionError("pauli_coefficient: operator dimension does not match 2^N");
  }
  // tr(QA) = i^{n_y} sum_c (-1)^{|z & c|} A(c, c ^ x)
  Complex acc = 0.0;
  for (std::uint64_t c = 0; c < dim; ++c) {
    const Complex value = a(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ q.x_mask()));
    acc += (popcount(q.z_mask() & c) & 1) ? -value : value;
  }
  return kIPowers[popcount(q.x_mask() & q.z_mask()) % 4] * acc / static_cast<double>(dim);
}

std::vector<Complex> pauli_decomposition(const Matrix& a, int n_sites) {
  check_sites(n_sites, kMaxPauliSites);
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  if (a.rows() != static_cast<Eigen::Index>(dim) || a.cols() != static_cast<Eigen::Index>(dim)) {
    throw DimensionError("pauli_decomposition: operator dimension does not match 2^N");
  }
  std::vector<Complex> out(dim * dim);
  std::vector<Complex> row(dim);
  const double inv_dim = 1.0 / static_cast<double>(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t c = 0; c < dim; ++c) {
      row[c] = a(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ x));
    }
    walsh_hadamard(row);
    for (std::uint64_t z = 0; z < dim; ++z) {
      out[(x << n_sites) | z] = kIPowers[popcount(x & z) % 4] * row[z] * inv_dim;
    }
  }
  return out;
}

}  // namespace qachaos
