#include "symtop/coupling.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace symtop {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

std::string to_string(DipoleClass c) {
  switch (c) {
    case DipoleClass::kGenuine: return "genuine";
    case DipoleClass::kOrthogonal: return "orthogonal";
    case DipoleClass::kGenericAccidental: return "generic-accidental";
  }
  return "?";
}

Dipole::Dipole(double a, double b, double c) : d1(a), d2(b), d3(c) {
  if (d1 == 0.0 && d2 == 0.0 && d3 == 0.0) throw std::invalid_argument("Dipole: dipole is zero");
}

DipoleClass Dipole::classify() const {
  if (d1 == 0.0 && d2 == 0.0) return DipoleClass::kGenuine;
  if (d3 == 0.0) return DipoleClass::kOrthogonal;
  return DipoleClass::kGenericAccidental;
}

double Dipole::in_plane_norm() const { return std::hypot(d1, d2); }

namespace {

double checked_sqrt(double x, const char* name) {
  if (x < 0.0) throw std::domain_error(std::string(name) + ": negative radicand");
  return std::sqrt(x);
}

double level_norm(int j) { return std::sqrt(static_cast<double>((2 * j + 1) * (2 * j + 3))); }

}  // namespace

double coeff_c(int j, int k, int m) {
  return checked_sqrt((j + k + 1.0) * (j + k + 2.0), "coeff_c") *
         checked_sqrt((j + m + 1.0) * (j + m + 2.0), "coeff_c") / (4.0 * (j + 1) * level_norm(j));
}

double coeff_d(int j, int k, int m) {
  return checked_sqrt((j + k + 1.0) * (j + k + 2.0), "coeff_d") *
         checked_sqrt((j + 1.0) * (j + 1.0) - m * m, "coeff_d") / (2.0 * (j + 1) * level_norm(j));
}

double coeff_h(int j, int k, int m) {
  if (j <= 0) throw std::domain_error("coeff_h: requires j >= 1");
  return checked_sqrt(j * (j + 1.0) - k * (k + 1.0), "coeff_h") *
         checked_sqrt(j * (j + 1.0) - m * (m + 1.0), "coeff_h") / (4.0 * j * (j + 1));
}

double coeff_q(int j, int k, int m) {
  if (j <= 0) throw std::domain_error("coeff_q: requires j >= 1");
  return checked_sqrt(j * (j + 1.0) - k * (k + 1.0), "coeff_q") * m / (2.0 * j * (j + 1));
}

double coeff_a(int j, int k, int m) {
  return checked_sqrt((j + 1.0) * (j + 1.0) - k * k, "coeff_a") *
         checked_sqrt((j + m + 1.0) * (j + m + 2.0), "coeff_a") / (2.0 * (j + 1) * level_norm(j));
}

double coeff_b(int j, int k, int m) {
  return checked_sqrt((j + 1.0) * (j + 1.0) - k * k, "coeff_b") *
         checked_sqrt((j + 1.0) * (j + 1.0) - m * m, "coeff_b") / ((j + 1) * level_norm(j));
}

double coeff_p(int j, int k, int m) {
  if (j <= 0) throw std::domain_error("coeff_p: requires j >= 1");
  return static_cast<double>(k) * m / (j * (j + 1.0));
}

double coeff_r(int j, int k, int m) {
  if (j <= 0) throw std::domain_error("coeff_r: requires j >= 1");
  return k * checked_sqrt(j * (j + 1.0) - m * (m + 1.0), "coeff_r") / (2.0 * j * (j + 1));
}

namespace {

// Table value for a pair in the listed direction: b.j == a.j + 1, or
// b.j == a.j (both orientations are listed there).
cd table_entry(const BasisIndex& a, const BasisIndex& b, const Dipole& dip, int field) {
  const int j = a.j;
  const int k = a.k;
  const int m = a.m;
  const int dk = b.k - a.k;
  const int dm = b.m - a.m;
  const cd zp = dip.z_plus();
  const cd zm = dip.z_minus();
  const double s = dm;

  if (b.j == j + 1 && std::abs(dk) == 1) {
    if (field == 1 && std::abs(dm) == 1) {
      return dk == 1 ? -coeff_c(j, k, dm * m) * zp : coeff_c(j, -k, dm * m) * zm;
    }
    if (field == 2 && std::abs(dm) == 1) {
      return dk == 1 ? -s * kI * coeff_c(j, k, dm * m) * zp : s * kI * coeff_c(j, -k, dm * m) * zm;
    }
    if (field == 3 && dm == 0) {
      return dk == 1 ? kI * coeff_d(j, k, m) * zp : -kI * coeff_d(j, -k, m) * zm;
    }
    return 0.0;
  }
  if (b.j == j && std::abs(dk) == 1) {
    if (field == 1 && std::abs(dm) == 1) {
      return dk == 1 ? -s * coeff_h(j, k, dm * m) * zp : -s * coeff_h(j, -k, dm * m) * zm;
    }
    if (field == 2 && std::abs(dm) == 1) {
      return dk == 1 ? -kI * coeff_h(j, k, dm * m) * zp : -kI * coeff_h(j, -k, dm * m) * zm;
    }
    if (field == 3 && dm == 0) {
      return dk == 1 ? -kI * coeff_q(j, k, m) * zp : -kI * coeff_q(j, -k, m) * zm;
    }
    return 0.0;
  }
  if (b.j == j + 1 && dk == 0) {
    if (field == 1 && std::abs(dm) == 1) return coeff_a(j, k, dm * m) * dip.d3;
    if (field == 2 && std::abs(dm) == 1) return s * kI * coeff_a(j, k, dm * m) * dip.d3;
    if (field == 3 && dm == 0) return -kI * coeff_b(j, k, m) * dip.d3;
    return 0.0;
  }
  // Zero-frequency couplings inside one (j, k) multiplet.
  if (b.j == j && dk == 0 && j > 0) {
    if (field == 1 && std::abs(dm) == 1) return -s * coeff_r(j, k, dm * m) * dip.d3;
    if (field == 2 && std::abs(dm) == 1) return -kI * coeff_r(j, k, dm * m) * dip.d3;
    if (field == 3 && dm == 0) return -kI * coeff_p(j, k, m) * dip.d3;
    return 0.0;
  }
  return 0.0;
}

bool listed_direction(const BasisIndex& a, const BasisIndex& b) {
  return b.j == a.j + 1 || b.j == a.j;
}

void check_field(int field) {
  if (field < 1 || field > 3) throw std::invalid_argument("field index must be 1, 2 or 3");
}

}  // namespace

cd table_pairing(const BasisIndex& from, const BasisIndex& to, const Dipole& dipole, int field) {
  check_field(field);
  if (std::abs(from.j - to.j) > 1 || std::abs(from.k - to.k) > 1 || std::abs(from.m - to.m) > 1) {
    return 0.0;
  }
  if (listed_direction(from, to)) return table_entry(from, to, dipole, field);
  if (listed_direction(to, from)) return -std::conj(table_entry(to, from, dipole, field));
  return 0.0;
}

CouplingBlock assemble_block(const StateSpace& space, const Dipole& dipole,
                             const BasisVariant& variant, int field) {
  check_field(field);
  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXcd ib = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      ib(a, b) = table_pairing(space[a], space[b], dipole, field);
    }
  }
  Eigen::MatrixXcd h = -kI * ib;
  if (variant.kind != BasisKind::kWigner) {
    const auto u = change_of_basis(space, variant);
    h = (u.adjoint() * h * u).eval();
  }
  return {field, space, variant, dipole, std::move(h)};
}

CouplingBlock assemble_block(const BlockSpace& block, const Dipole& dipole,
                             const BasisVariant& variant, int field) {
  return assemble_block(block.space, dipole, variant, field);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      data.push_back(m(r, c).real());
      data.push_back(m(r, c).imag());
    }
  }
  return {{"format", "symtop-matrix"}, {"version", 1}, {"layout", "column-major-complex-pairs"},
          {"rows", m.rows()},          {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "symtop-matrix" || j.value("version", 0) != 1) {
    throw std::runtime_error("matrix_from_json: unsupported format or version");
  }
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != 2 * rows * cols) {
    throw std::runtime_error("matrix_from_json: data length does not match shape");
  }
  Eigen::MatrixXcd m(rows, cols);
  std::size_t i = 0;
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r, i += 2) {
      m(r, c) = cd(data[i].get<double>(), data[i + 1].get<double>());
    }
  }
  return m;
}

nlohmann::json to_json(const CouplingBlock& block) {
  nlohmann::json indices = nlohmann::json::array();
  for (const auto& b : block.space) indices.push_back({b.j, b.k, b.m});
  return {{"field", block.field},
          {"variant", to_string(block.variant.kind)},
          {"theta", block.variant.theta},
          {"dipole", {block.dipole.d1, block.dipole.d2, block.dipole.d3}},
          {"indices", indices},
          {"matrix", matrix_to_json(block.matrix)}};
}

namespace {
constexpr char kMagic[8] = {'S', 'Y', 'M', 'T', 'O', 'P', 'M', 'X'};
constexpr std::uint32_t kBinaryVersion = 1;
}  // namespace

void write_matrix_binary(std::ostream& os, const Eigen::MatrixXcd& m) {
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  os.write(kMagic, sizeof(kMagic));
  os.write(reinterpret_cast<const char*>(&kBinaryVersion), sizeof(kBinaryVersion));
  os.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  os.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  // Eigen's default storage is column-major, matching the format.
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(sizeof(cd) * rows * cols));
  if (!os) throw std::runtime_error("write_matrix_binary: stream error");
}

Eigen::MatrixXcd read_matrix_binary(std::istream& is) {
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  is.read(magic, sizeof(magic));
  is.read(reinterpret_cast<char*>(&version), sizeof(version));
  is.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  is.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || version != kBinaryVersion) {
    throw std::runtime_error("read_matrix_binary: bad header");
  }
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(cd) * rows * cols));
  if (!is) throw std::runtime_error("read_matrix_binary: truncated data");
  return m;
}

}  // namespace symtop
