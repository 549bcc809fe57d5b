#ifndef SYMTOP_POLYNOMIAL_H_
#define SYMTOP_POLYNOMIAL_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Dense>

namespace symtop {

/// Ambient coordinates (q0, q1, q2, q3, P1, P2, P3).
inline constexpr int kVars = 7;

using Monomial = std::array<std::uint8_t, kVars>;
using Point = Eigen::Matrix<double, kVars, 1>;

/// Sparse real polynomial in the seven ambient coordinates.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(double c);

  static Polynomial variable(int i);

  const std::map<Monomial, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double c) { return a *= c; }
  friend Polynomial operator*(double c, Polynomial a) { return a *= c; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  Polynomial derivative(int i) const;
  double evaluate(const Point& x) const;
  std::string to_string() const;

 private:
  void add_term(const Monomial& m, double c);
  std::map<Monomial, double> terms_;
};

/// Polynomial vector field on R^7.
using PolyField = std::array<Polynomial, kVars>;

/// [A, B]^i = sum_j A^j d_j B^i - B^j d_j A^i.
PolyField lie_bracket(const PolyField& a, const PolyField& b);
Point evaluate(const PolyField& f, const Point& x);

}  // namespace symtop

#endif  // SYMTOP_POLYNOMIAL_H_
