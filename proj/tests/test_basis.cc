#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "symtop/basis.h"

using namespace symtop;

namespace {

// Lexicographic enumeration of every (l, k, m) with l <= lmax.
std::vector<BasisIndex> enumerate(int lmax) {
  std::vector<BasisIndex> out;
  for (int l = 0; l <= lmax; ++l)
    for (int k = -l; k <= l; ++k)
      for (int m = -l; m <= l; ++m) out.push_back({l, k, m});
  return out;
}

std::string thrown_message(int j, int k, int m) {
  try {
    make_index(j, k, m);
  } catch (const std::out_of_range& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Rho, MatchesEnumerationOracle) {
  const auto all = enumerate(5);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(rho(all[i].j, all[i].k, all[i].m), i) << to_string(all[i]);
  }
}

TEST(Rho, Examples) {
  EXPECT_EQ(rho(0, 0, 0), 0u);
  EXPECT_EQ(rho(1, -1, -1), 1u);
  EXPECT_EQ(rho(1, 0, 1), 6u);
}

TEST(Rho, RangeErrorsNameTheField) {
  EXPECT_NE(thrown_message(1, 2, 0).find("k="), std::string::npos);
  EXPECT_NE(thrown_message(1, 0, -2).find("m="), std::string::npos);
  EXPECT_NE(thrown_message(-1, 0, 0).find("j"), std::string::npos);
  EXPECT_THROW(rho(2, 0, 3), std::out_of_range);
}

TEST(BlockSpace, DimensionsAndOrdering) {
  const std::size_t dims[] = {10, 34, 74};
  for (int j = 0; j <= 2; ++j) {
    const auto b = block_space(j);
    EXPECT_EQ(b.dim(), dims[j]);
    EXPECT_EQ(b.dim(), static_cast<std::size_t>((2 * j + 1) * (2 * j + 1) + (2 * j + 3) * (2 * j + 3)));
    for (std::size_t i = 0; i + 1 < b.dim(); ++i) EXPECT_LT(b.space[i], b.space[i + 1]);
    for (const auto& x : b.space) {
      EXPECT_TRUE(x.j == j || x.j == j + 1);
      EXPECT_EQ(*b.space.position(x), rho(x.j, x.k, x.m) - rho(j, -j, -j));
    }
  }
  EXPECT_THROW(block_space(-1), std::out_of_range);
}

TEST(StateSpace, RejectsDuplicatesAndSelects) {
  EXPECT_THROW(StateSpace({{1, 0, 0}, {1, 0, 0}}), std::invalid_argument);
  const auto fk = StateSpace::fixed_k(1, 0, 3);
  EXPECT_EQ(fk.size(), 3u + 5u + 7u);
  for (const auto& x : fk) EXPECT_EQ(x.k, 1);
  const auto fm = StateSpace::fixed_m(-1, 1, 2);
  EXPECT_EQ(fm.size(), 3u + 5u);
  EXPECT_TRUE(fm.closed_under_k_reflection());
  EXPECT_FALSE(fk.closed_under_k_reflection());
  EXPECT_FALSE(fk.contains({2, 0, 0}));
}

TEST(Variants, ChangeOfBasisIsUnitary) {
  const auto space = block_space(1).space;
  for (const auto& v : {BasisVariant::wigner(), BasisVariant::rotated_wigner(0.7), BasisVariant::wang(),
                        BasisVariant::rotated_wang(2.1)}) {
    const auto u = change_of_basis(space, v);
    const auto n = u.rows();
    EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).norm(), 1e-13) << to_string(v.kind);
  }
}

TEST(Variants, WangColumns) {
  const auto space = block_space(1).space;
  const auto labels = wang_labels(space);
  const auto u = change_of_basis(space, BasisVariant::wang());
  ASSERT_EQ(labels.size(), space.size());
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const auto& w = labels[c];
    const auto col = u.col(static_cast<Eigen::Index>(c));
    const auto plus = static_cast<Eigen::Index>(*space.position({w.j, w.k, w.m}));
    if (w.k == 0) {
      EXPECT_EQ(w.gamma, 0);
      EXPECT_NEAR(std::abs(col(plus) - 1.0), 0.0, 1e-15);
      EXPECT_NEAR(col.norm(), 1.0, 1e-15);
      continue;
    }
    const auto minus = static_cast<Eigen::Index>(*space.position({w.j, -w.k, w.m}));
    EXPECT_NEAR(std::abs(col(plus) - s), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(col(minus) - (w.gamma == 0 ? s : -s)), 0.0, 1e-15);
  }
  EXPECT_THROW(wang_labels(StateSpace::fixed_k(1, 1, 2)), std::invalid_argument);
}

TEST(Variants, RotatedPhases) {
  const auto space = block_space(0).space;
  const double theta = 0.4;
  const auto u = change_of_basis(space, BasisVariant::rotated_wigner(theta));
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto e = std::polar(1.0, -space[i].k * theta);
    EXPECT_NEAR(std::abs(u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) - e), 0.0, 1e-15);
  }
}

TEST(Theta, Modes) {
  const double d1 = 0.3, d2 = 0.4;
  const std::complex<double> z(d2, d1);
  const double tr = theta_for_dipole(d1, d2, ThetaMode::kRealAxis);
  const double ti = theta_for_dipole(d1, d2, ThetaMode::kImagAxis);
  const auto zr = std::polar(1.0, -tr) * z;
  const auto zi = std::polar(1.0, -ti) * z;
  EXPECT_NEAR(zr.imag(), 0.0, 1e-15);
  EXPECT_GT(zr.real(), 0.0);
  EXPECT_NEAR(zi.real(), 0.0, 1e-15);
  EXPECT_GT(zi.imag(), 0.0);
  for (double t : {tr, ti}) {
    EXPECT_GE(t, 0.0);
    EXPECT_LT(t, 2 * std::numbers::pi);
  }
  EXPECT_THROW(theta_for_dipole(0.0, 0.0, ThetaMode::kRealAxis), std::invalid_argument);
}
