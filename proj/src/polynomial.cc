#include "symtop/polynomial.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace symtop {

Polynomial::Polynomial(double c) {
  if (c != 0.0) terms_[Monomial{}] = c;
}

Polynomial Polynomial::variable(int i) {
  if (i < 0 || i >= kVars) throw std::out_of_range("Polynomial::variable: index out of range");
  Polynomial p;
  Monomial m{};
  m[i] = 1;
  p.terms_[m] = 1.0;
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (auto e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Monomial& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0.0) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m;
      for (int i = 0; i < kVars; ++i) m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::derivative(int i) const {
  if (i < 0 || i >= kVars) throw std::out_of_range("Polynomial::derivative: index out of range");
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Monomial d = m;
    --d[i];
    out.add_term(d, c * m[i]);
  }
  return out;
}

double Polynomial::evaluate(const Point& x) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int i = 0; i < kVars; ++i) {
      for (int e = 0; e < m[i]; ++e) t *= x(i);
    }
    sum += t;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  static const char* names[kVars] = {"q0", "q1", "q2", "q3", "P1", "P2", "P3"};
  if (terms_.empty()) return "0";
  std::string s;
  char buf[40];
  for (const auto& [m, c] : terms_) {
    std::snprintf(buf, sizeof buf, "%+.17g", c);
    s += buf;
    for (int i = 0; i < kVars; ++i) {
      for (int e = 0; e < m[i]; ++e) s += std::string("*") + names[i];
    }
  }
  return s;
}

PolyField lie_bracket(const PolyField& a, const PolyField& b) {
  PolyField out;
  for (int i = 0; i < kVars; ++i) {
    for (int j = 0; j < kVars; ++j) {
      if (!a[j].is_zero()) out[i] += a[j] * b[i].derivative(j);
      if (!b[j].is_zero()) out[i] -= b[j] * a[i].derivative(j);
    }
  }
  return out;
}

Point evaluate(const PolyField& f, const Point& x) {
  Point v;
  for (int i = 0; i < kVars; ++i) v(i) = f[i].evaluate(x);
  return v;
}

}  // namespace symtop
