#ifndef SYMTOP_COUPLING_H_
#define SYMTOP_COUPLING_H_

#include <complex>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"
#include "symtop/basis.h"

namespace symtop {

enum class DipoleClass { kGenuine, kOrthogonal, kGenericAccidental };

std::string to_string(DipoleClass c);

/// Body-frame dipole moment. The zero dipole is rejected.
struct Dipole {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 1.0;

  Dipole() = default;
  Dipole(double d1, double d2, double d3);

  DipoleClass classify() const;
  double in_plane_norm() const;
  std::complex<double> z_plus() const { return {d2, d1}; }
  std::complex<double> z_minus() const { return {d2, -d1}; }
};

// Closed-form pairing coefficients. Each throws std::domain_error when a
// radicand is negative (or j = 0 for h and q).
double coeff_c(int j, int k, int m);
double coeff_d(int j, int k, int m);
double coeff_h(int j, int k, int m);
double coeff_q(int j, int k, int m);
double coeff_a(int j, int k, int m);
double coeff_b(int j, int k, int m);
// Zero-frequency couplings within one (j, k) multiplet, proportional to d3:
// p = k m / (j(j+1)) on Δm = 0 and r = k sqrt(j(j+1) - m(m+1)) / (2j(j+1))
// on Δm = ±1. They never survive the spectral masks but enter the dynamics.
double coeff_p(int j, int k, int m);
double coeff_r(int j, int k, int m);

/// <D_from, i B_l D_to> in the Wigner basis, from the closed-form tables.
/// Pairs outside the tables' direction are obtained by skew-Hermitian
/// completion; pairs violating the selection rules give 0.
std::complex<double> table_pairing(const BasisIndex& from, const BasisIndex& to, const Dipole& dipole,
                                   int field);

/// Hermitian interaction Hamiltonian B_l restricted to a state space.
struct CouplingBlock {
  int field = 1;
  StateSpace space;
  BasisVariant variant;
  Dipole dipole;
  Eigen::MatrixXcd matrix;

  /// The skew-Hermitian generator i B_l.
  Eigen::MatrixXcd ib() const { return std::complex<double>(0.0, 1.0) * matrix; }
};

CouplingBlock assemble_block(const StateSpace& space, const Dipole& dipole,
                             const BasisVariant& variant, int field);
CouplingBlock assemble_block(const BlockSpace& block, const Dipole& dipole,
                             const BasisVariant& variant, int field);

/// Unit-normalised Wigner function value used by the quadrature oracle:
/// i^{m-k} sqrt((2j+1)/(8 pi^2)) e^{i(m alpha + k gamma)} d^j_{k,m}(beta).
std::complex<double> wigner_function(const BasisIndex& b, double alpha, double beta, double gamma);

/// Standard Wigner small-d d^j_{k,m}(beta) by the finite factorial sum.
double wigner_small_d(int j, int k, int m, double beta);

/// Independent numerical evaluation of <D_from, i B_l D_to> by Gauss-Legendre
/// quadrature in cos(beta) and trapezoid rules in alpha and gamma, with
/// B_l = -(R(alpha, beta, gamma) delta)_l. Levels are limited to j <= 3.
class QuadratureOracle {
 public:
  static constexpr int kMaxLevel = 3;

  explicit QuadratureOracle(int beta_nodes = 48, int angle_nodes = 64);

  std::complex<double> pairing(const BasisIndex& from, const BasisIndex& to, const Dipole& dipole,
                               int field) const;
  /// Oracle version of assemble_block(space, dipole, Wigner, field).ib().
  Eigen::MatrixXcd ib_matrix(const StateSpace& space, const Dipole& dipole, int field) const;

 private:
  int beta_nodes_;
  int angle_nodes_;
  Eigen::VectorXd x_;  // Gauss-Legendre nodes on [-1, 1]
  Eigen::VectorXd w_;
};

std::complex<double> quadrature_oracle(const BasisIndex& from, const BasisIndex& to,
                                       const Dipole& dipole, int field);

/// Versioned export, column-major complex pairs.
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CouplingBlock& block);
void write_matrix_binary(std::ostream& os, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix_binary(std::istream& is);

}  // namespace symtop

#endif  // SYMTOP_COUPLING_H_
