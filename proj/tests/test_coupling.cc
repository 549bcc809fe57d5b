#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "symtop/coupling.h"

using namespace symtop;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre rule by Golub-Welsch.
void golub_welsch(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) t(i, i - 1) = t(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    w[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

// d^j(beta) = exp(-i beta J_y) in the basis m = -j..j.
Eigen::MatrixXd small_d_matrix(int j, double beta) {
  const int n = 2 * j + 1;
  Eigen::MatrixXcd jy = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a + 1 < n; ++a) {
    const double m = a - j;
    const double c = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    jy(a + 1, a) = cd(0, -0.5 * c);  // <m+1|J_y|m>
    jy(a, a + 1) = cd(0, 0.5 * c);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(jy);
  Eigen::VectorXcd ph(n);
  for (int i = 0; i < n; ++i) ph(i) = std::polar(1.0, -beta * es.eigenvalues()(i));
  return (es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint()).real();
}

Eigen::Matrix3d rotation(double a, double b, double g) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(a, Vector3d::UnitZ()) * AngleAxisd(b, Vector3d::UnitY()) * AngleAxisd(g, Vector3d::UnitZ()))
      .toRotationMatrix();
}

// Brute-force <D_a, i B_l D_b> over the whole Euler-angle grid.
std::array<Eigen::MatrixXcd, 3> brute_force_ib(const StateSpace& space, const Dipole& dip) {
  const int nb = 40;
  const int na = 16;
  std::vector<double> x, w;
  golub_welsch(nb, x, w);
  const auto n = static_cast<Eigen::Index>(space.size());
  std::array<Eigen::MatrixXcd, 3> out;
  for (auto& m : out) m = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::Vector3d delta(dip.d1, dip.d2, dip.d3);
  int jmax = 0;
  for (const auto& s : space) jmax = std::max(jmax, s.j);
  for (int ib = 0; ib < nb; ++ib) {
    const double beta = std::acos(x[ib]);
    std::vector<Eigen::MatrixXd> d;
    for (int j = 0; j <= jmax; ++j) d.push_back(small_d_matrix(j, beta));
    for (int ia = 0; ia < na; ++ia) {
      const double alpha = 2 * kPi * ia / na;
      for (int ig = 0; ig < na; ++ig) {
        const double gamma = 2 * kPi * ig / na;
        const Eigen::Vector3d rd = rotation(alpha, beta, gamma) * delta;
        const double weight = w[ib] * (2 * kPi / na) * (2 * kPi / na);
        Eigen::VectorXcd vals(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const auto& s = space[static_cast<std::size_t>(i)];
          cd ph = 1.0;
          for (int p = 0; p < ((s.m - s.k) % 4 + 4) % 4; ++p) ph *= cd(0, 1);
          vals(i) = ph * std::sqrt((2.0 * s.j + 1) / (8 * kPi * kPi)) * std::polar(1.0, s.m * alpha + s.k * gamma) *
                    d[static_cast<std::size_t>(s.j)](s.k + s.j, s.m + s.j);
        }
        const Eigen::MatrixXcd outer = vals.conjugate() * vals.transpose();
        for (int l = 0; l < 3; ++l) out[static_cast<std::size_t>(l)] += cd(0, -1) * weight * rd(l) * outer;
      }
    }
  }
  return out;
}

}  // namespace

TEST(Coefficients, ClosedFormExamples) {
  EXPECT_NEAR(coeff_c(0, 0, 0), 1.0 / (2 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(coeff_h(1, 0, 0), 0.25, 1e-15);
  EXPECT_NEAR(coeff_q(1, 0, 1), std::sqrt(2.0) / 4, 1e-15);
  EXPECT_NEAR(coeff_a(0, 0, 0), std::sqrt(2.0) / (2 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(coeff_b(0, 0, 0), 1.0 / std::sqrt(3.0), 1e-15);
  for (int j = 1; j <= 4; ++j)
    for (int k = -j; k <= j; ++k) EXPECT_EQ(coeff_q(j, k, 0), 0.0);
  EXPECT_THROW(coeff_h(0, 0, 0), std::domain_error);
}

TEST(Dipole, Classification) {
  EXPECT_EQ(Dipole(0, 0, 1).classify(), DipoleClass::kGenuine);
  EXPECT_EQ(Dipole(0.3, 0.4, 0).classify(), DipoleClass::kOrthogonal);
  EXPECT_EQ(Dipole(0.3, 0.4, 0.1).classify(), DipoleClass::kGenericAccidental);
  EXPECT_THROW(Dipole(0, 0, 0), std::invalid_argument);
}

TEST(Pairing, SpecExamples) {
  const auto b = table_pairing({0, 0, 0}, {1, 0, 0}, Dipole(0, 0, 1), 3);
  EXPECT_NEAR(std::abs(b - cd(0, -coeff_b(0, 0, 0))), 0.0, 1e-15);
  const auto c = table_pairing({0, 0, 0}, {1, 1, 1}, Dipole(0, 1, 0), 1);
  EXPECT_NEAR(std::abs(c + coeff_c(0, 0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(quadrature_oracle({0, 0, 0}, {1, 1, 1}, Dipole(0, 1, 0), 1) + coeff_c(0, 0, 0)), 0.0, 1e-13);
  EXPECT_EQ(table_pairing({1, 0, -1}, {2, 0, 1}, Dipole(0.3, 0.4, 0.1), 1), cd(0.0));
}

class BruteForce : public ::testing::TestWithParam<int> {};

TEST_P(BruteForce, AssembledBlocksMatchIndependentQuadrature) {
  const int j = GetParam();
  const auto block = block_space(j);
  for (const auto& dip : {Dipole(0, 0, 1), Dipole(0.3, 0.4, 0), Dipole(0, 0.2, 0.3), Dipole(-0.5, 0.1, 0.7)}) {
    const auto oracle = brute_force_ib(block.space, dip);
    for (int l = 1; l <= 3; ++l) {
      const auto a = assemble_block(block, dip, BasisVariant::wigner(), l);
      EXPECT_LT((a.ib() - oracle[static_cast<std::size_t>(l - 1)]).cwiseAbs().maxCoeff(), 1e-10)
          << "j=" << j << " field " << l;
      EXPECT_LT((a.matrix - a.matrix.adjoint()).norm(), 1e-14);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Blocks, BruteForce, ::testing::Values(0, 1, 2));

TEST(Oracle, LibraryQuadratureAgreesWithBruteForce) {
  const auto space = block_space(1).space;
  const Dipole dip(0.3, -0.4, 0.2);
  const auto brute = brute_force_ib(space, dip);
  const QuadratureOracle oracle;
  for (int l = 1; l <= 3; ++l) {
    EXPECT_LT((oracle.ib_matrix(space, dip, l) - brute[static_cast<std::size_t>(l - 1)]).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(QuadratureOracle(8, 64), std::invalid_argument);
  EXPECT_THROW(oracle.pairing({4, 0, 0}, {4, 0, 0}, dip, 1), std::out_of_range);
}

TEST(SelectionRules, GenuineDipoleConservesK) {
  const auto block = block_space(2);
  for (int l = 1; l <= 3; ++l) {
    const auto b = assemble_block(block, Dipole(0, 0, 1), BasisVariant::wigner(), l).matrix;
    for (std::size_t r = 0; r < block.dim(); ++r)
      for (std::size_t c = 0; c < block.dim(); ++c) {
        const auto& x = block.space[r];
        const auto& y = block.space[c];
        const double v = std::abs(b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
        if (x.k != y.k || std::abs(x.m - y.m) > 1) {
          EXPECT_LT(v, 1e-15);
        }
      }
  }
}

TEST(RotatedBasis, AlignsTheInPlaneDipole) {
  const Dipole d(0.3, 0.4, 0.2);
  const double r = std::hypot(d.d1, d.d2);
  const auto block = block_space(1);
  const double tr = theta_for_dipole(d.d1, d.d2, ThetaMode::kRealAxis);
  const double ti = theta_for_dipole(d.d1, d.d2, ThetaMode::kImagAxis);
  for (int l = 1; l <= 3; ++l) {
    const auto real_axis = assemble_block(block, d, BasisVariant::rotated_wigner(tr), l).matrix;
    const auto imag_axis = assemble_block(block, d, BasisVariant::rotated_wigner(ti), l).matrix;
    EXPECT_LT((real_axis - assemble_block(block, Dipole(0, r, d.d3), BasisVariant::wigner(), l).matrix).norm(), 1e-14);
    EXPECT_LT((imag_axis - assemble_block(block, Dipole(r, 0, d.d3), BasisVariant::wigner(), l).matrix).norm(), 1e-14);
  }
}

TEST(RotatedBasis, SpectrumIsBasisIndependent) {
  const auto block = block_space(1);
  const Dipole d(0.3, 0.4, 0.2);
  const auto w = assemble_block(block, d, BasisVariant::wigner(), 2).matrix;
  const auto v = assemble_block(block, d, BasisVariant::rotated_wang(1.1), 2).matrix;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> a(w), b(v);
  EXPECT_LT((a.eigenvalues() - b.eigenvalues()).norm(), 1e-13);
}

TEST(Export, JsonAndBinaryRoundTrip) {
  const auto m = assemble_block(block_space(0), Dipole(0.3, 0.4, 0.1), BasisVariant::wigner(), 1).matrix;
  EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
  std::stringstream ss;
  write_matrix_binary(ss, m);
  EXPECT_EQ(read_matrix_binary(ss), m);
  std::stringstream bad("NOTMAGIC");
  EXPECT_THROW(read_matrix_binary(bad), std::runtime_error);
}
