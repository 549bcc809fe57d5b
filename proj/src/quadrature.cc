#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "symtop/coupling.h"

namespace symtop {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Gauss-Legendre nodes and weights by Newton iteration on P_n.
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x(i) = z;
    w(i) = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// One separable term coef * fa(alpha) * fb(beta) * fg(gamma) of an entry of
// the rotation matrix. Factor codes: 0 = 1, 1 = cos, 2 = sin.
struct Term {
  double coef;
  int fa;
  int fb;
  int fg;
};

// Terms of R(alpha, beta, gamma)_{row, col}, zero-based.
const std::vector<Term>& rotation_terms(int row, int col) {
  static const std::array<std::array<std::vector<Term>, 3>, 3> table = {{
      {{{{1, 1, 1, 1}, {-1, 2, 0, 2}}, {{-1, 1, 1, 2}, {-1, 2, 0, 1}}, {{1, 1, 2, 0}}}},
      {{{{1, 2, 1, 1}, {1, 1, 0, 2}}, {{-1, 2, 1, 2}, {1, 1, 0, 1}}, {{1, 2, 2, 0}}}},
      {{{{-1, 0, 2, 1}}, {{1, 0, 2, 2}}, {{1, 0, 1, 0}}}},
  }};
  return table[row][col];
}

double factor(int code, double t) {
  switch (code) {
    case 1: return std::cos(t);
    case 2: return std::sin(t);
    default: return 1.0;
  }
}

cd i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

void check_level(const BasisIndex& b) {
  if (b.j > QuadratureOracle::kMaxLevel) {
    throw std::out_of_range("quadrature oracle supports levels j <= 3, got " + to_string(b));
  }
  make_index(b.j, b.k, b.m);
}

}  // namespace

double wigner_small_d(int j, int k, int m, double beta) {
  if (std::abs(k) > j || std::abs(m) > j) return 0.0;
  const double c = std::cos(beta / 2);
  const double s = std::sin(beta / 2);
  double sum = 0.0;
  for (int t = 0; t <= 2 * j; ++t) {
    const int a1 = j + m - t;
    const int a3 = k - m + t;
    const int a4 = j - k - t;
    if (a1 < 0 || a3 < 0 || a4 < 0) continue;
    const double sign = ((k - m + t) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * std::pow(c, 2 * j + m - k - 2 * t) * std::pow(s, k - m + 2 * t) /
           (factorial(a1) * factorial(t) * factorial(a3) * factorial(a4));
  }
  return std::sqrt(factorial(j + k) * factorial(j - k) * factorial(j + m) * factorial(j - m)) * sum;
}

cd wigner_function(const BasisIndex& b, double alpha, double beta, double gamma) {
  const double norm = std::sqrt((2.0 * b.j + 1.0) / (8.0 * kPi * kPi));
  return i_power(b.m - b.k) * norm * std::polar(1.0, b.m * alpha + b.k * gamma) *
         wigner_small_d(b.j, b.k, b.m, beta);
}

QuadratureOracle::QuadratureOracle(int beta_nodes, int angle_nodes)
    : beta_nodes_(beta_nodes), angle_nodes_(angle_nodes) {
  if (beta_nodes_ < 32 || angle_nodes_ < 64) {
    throw std::invalid_argument("QuadratureOracle: need >= 32 beta nodes and >= 64 angle nodes");
  }
  gauss_legendre(beta_nodes_, x_, w_);
}

cd QuadratureOracle::pairing(const BasisIndex& from, const BasisIndex& to, const Dipole& dipole,
                             int field) const {
  if (field < 1 || field > 3) throw std::invalid_argument("field index must be 1, 2 or 3");
  check_level(from);
  check_level(to);
  const double h = 2 * kPi / angle_nodes_;
  // Trapezoid rule for int_0^{2 pi} e^{i n t} f(t) dt.
  auto angular = [&](int n, int code) {
    cd acc = 0.0;
    for (int i = 0; i < angle_nodes_; ++i) {
      const double t = i * h;
      acc += std::polar(1.0, n * t) * factor(code, t);
    }
    return acc * h;
  };
  // int_0^pi d_from d_to f(beta) sin(beta) d beta, in x = cos(beta).
  auto polar = [&](int code) {
    double acc = 0.0;
    for (int i = 0; i < beta_nodes_; ++i) {
      const double beta = std::acos(x_(i));
      acc += w_(i) * wigner_small_d(from.j, from.k, from.m, beta) *
             wigner_small_d(to.j, to.k, to.m, beta) * factor(code, beta);
    }
    return acc;
  };

  const double norm = std::sqrt((2.0 * from.j + 1.0) * (2.0 * to.j + 1.0)) / (8.0 * kPi * kPi);
  const cd phase = std::conj(i_power(from.m - from.k)) * i_power(to.m - to.k);
  const int dm = to.m - from.m;
  const int dk = to.k - from.k;
  const std::array<double, 3> delta = {dipole.d1, dipole.d2, dipole.d3};

  cd rdelta = 0.0;  // int conj(D_from) (R delta)_l D_to
  for (int col = 0; col < 3; ++col) {
    if (delta[col] == 0.0) continue;
    for (const auto& term : rotation_terms(field - 1, col)) {
      rdelta += delta[col] * term.coef * angular(dm, term.fa) * polar(term.fb) *
                angular(dk, term.fg);
    }
  }
  // i B_l = -i (R delta)_l
  return cd(0.0, -1.0) * norm * phase * rdelta;
}

Eigen::MatrixXcd QuadratureOracle::ib_matrix(const StateSpace& space, const Dipole& dipole,
                                             int field) const {
  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = pairing(space[a], space[b], dipole, field);
  }
  return out;
}

cd quadrature_oracle(const BasisIndex& from, const BasisIndex& to, const Dipole& dipole, int field) {
  static const QuadratureOracle oracle;
  return oracle.pairing(from, to, dipole, field);
}

}  // namespace symtop
