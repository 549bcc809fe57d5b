#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "symtop/quantum_dynamics.h"

using namespace symtop;
using Eigen::MatrixXcd;
using cd = std::complex<double>;

namespace {

Inertia reference_inertia() { return Inertia(1.0, 1.0 / std::sqrt(2.0)); }

}  // namespace

TEST(Pulse, Validation) {
  ControlPulse p;
  p.segments.push_back({1.0, {0.5, 0.0, -1.0}});
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.total_time(), 1.0);
  p.segments.push_back({0.0, {0.0, 0.0, 0.0}});
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.segments.back() = {1.0, {0.0, 1.5, 0.0}};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  std::mt19937_64 rng(3);
  EXPECT_NO_THROW(ControlPulse::random(rng, 5, 0.7, 2.0).validate());
}

TEST(Propagator, MatchesPadeExponential) {
  const auto sys = SystemMatrices::build(StateSpace::levels(0, 2), Dipole(0.3, -0.4, 0.2), reference_inertia());
  const std::array<double, 3> u{0.4, -0.7, 0.25};
  const MatrixXcd h = sys.hamiltonian(u);
  EXPECT_LT((h - h.adjoint()).norm(), 1e-14);
  const MatrixXcd oracle = (cd(0, -0.8) * h).exp();
  EXPECT_LT((segment_propagator(sys, u, 0.8) - oracle).norm(), 1e-12);
}

TEST(Propagator, FreeEvolutionIsDiagonal) {
  const auto sys = SystemMatrices::build(StateSpace::levels(0, 2), Dipole(0, 0.2, 0.3), reference_inertia());
  const auto u = segment_propagator(sys, {0, 0, 0}, 1.3);
  for (Eigen::Index i = 0; i < sys.dim(); ++i) {
    const auto& b = sys.space[static_cast<std::size_t>(i)];
    EXPECT_LT(std::abs(u(i, i) - std::polar(1.0, -1.3 * energy(reference_inertia(), b.j, b.k))), 1e-13);
  }
  EXPECT_LT((u - MatrixXcd(u.diagonal().asDiagonal())).norm(), 1e-13);
}

TEST(Propagator, ComposesAndStaysUnitary) {
  const auto sys = SystemMatrices::build(StateSpace::levels(0, 3), Dipole(0.1, 0.2, 0.3), reference_inertia());
  std::mt19937_64 rng(11);
  const auto pulse = ControlPulse::random(rng, 12, 1.0, 1.0);
  const auto u = propagator(sys, pulse);
  EXPECT_LT(unitarity_defect(u), 1e-12);
  ControlPulse split;
  for (const auto& s : pulse.segments) {
    split.segments.push_back({s.duration / 2, s.u});
    split.segments.push_back({s.duration / 2, s.u});
  }
  EXPECT_LT((propagator(sys, split) - u).norm(), 1e-11);
  const auto psi = QuantumState::random(rng, sys.dim());
  EXPECT_NEAR(propagate(psi, pulse, sys).norm(), 1.0, 1e-12);
}

TEST(Operators, P3IsDiagonalK) {
  const auto space = StateSpace::levels(0, 2);
  const auto p3 = p3_operator(space);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    EXPECT_EQ(p3(ii, ii), cd(space[i].k));
  }
}

TEST(Symmetry, GenuineDetector) {
  const auto g = detect_genuine_symmetry(Dipole(0, 0, 1), reference_inertia(), 2);
  EXPECT_TRUE(g.conserved);
  EXPECT_LT(g.max_commutator, 1e-12);
  EXPECT_LT(g.p3_drift, 1e-9);
  EXPECT_LT(g.p3_drift_zero_control, 1e-12);
  const auto b = detect_genuine_symmetry(Dipole(0, 0.2, 0.3), reference_inertia(), 2);
  EXPECT_FALSE(b.conserved);
  EXPECT_GT(b.max_commutator, 1e-3);
}

TEST(Symmetry, ParityDetector) {
  const auto p = detect_parity_symmetry(Dipole(0.3, 0.4, 0), reference_inertia(), 2);
  EXPECT_EQ(p.status, "conserved");
  EXPECT_LT(p.max_cross, 1e-12);
  for (const auto& b : p.blocks) EXPECT_GT(b.even_dim * b.odd_dim, 0u);
  EXPECT_EQ(detect_parity_symmetry(Dipole(0.3, 0.4, 0.1), reference_inertia(), 1).status, "not-applicable");
  EXPECT_EQ(detect_parity_symmetry(Dipole(0, 0, 1), reference_inertia(), 1).status, "not-applicable");
  EXPECT_EQ(wang_parity(StateSpace::levels(0, 2)).size(), 35u);
}

TEST(Restricted, S0Blocks) {
  const auto r = restricted_Sk_check(0, 2, Dipole(0, 0, 1), reference_inertia());
  ASSERT_EQ(r.blocks.size(), 2u);
  EXPECT_EQ(r.blocks[0].reached_dim, 15u);
  EXPECT_EQ(r.blocks[1].reached_dim, 63u);
  EXPECT_TRUE(r.graph_linear);
  EXPECT_TRUE(r.m_tracker);
  EXPECT_EQ(to_json(r)["verdict"], "MTracker on S_k");
}

TEST(Restricted, Preconditions) {
  EXPECT_THROW(restricted_Sk_check(0, 2, Dipole(0, 0.2, 0.3), reference_inertia()), std::invalid_argument);
  EXPECT_THROW(restricted_Sk_check(3, 2, Dipole(0, 0, 1), reference_inertia()), std::invalid_argument);
}

TEST(ThreeWave, AsymmetryOnlyWithoutGenuineSymmetry) {
  const auto gen = three_wave_mixing_demo(1, 1, 1, Dipole(0, 0.2, 0.3), reference_inertia());
  const auto gnu = three_wave_mixing_demo(1, 1, 1, Dipole(0, 0, 1), reference_inertia());
  EXPECT_GT(gen.branch_asymmetry, 0.1);
  EXPECT_LT(gnu.branch_asymmetry, 1e-6);
  EXPECT_LT(gen.unitarity_defect, 1e-9);
  EXPECT_EQ(gen.segments.size(), 3u);
  EXPECT_NEAR(gnu.branch_plus + gnu.branch_minus, 1.0, 0.05);
  std::ostringstream os;
  write_trace_csv(os, gen);
  EXPECT_EQ(os.str().rfind("t,", 0), 0u);
}

TEST(ThreeWave, Preconditions) {
  EXPECT_THROW(three_wave_mixing_demo(1, 0, 1, Dipole(0, 0, 1), reference_inertia()), std::invalid_argument);
  EXPECT_THROW(three_wave_mixing_demo(1, 2, 1, Dipole(0, 0, 1), reference_inertia()), std::invalid_argument);
}

TEST(Truncation, WeakPulseStaysInLowLevels) {
  ControlPulse pulse;
  pulse.segments.push_back({1.0, {0.1, 0.1, 0.1}});
  const auto t = truncation_sanity(Dipole(0, 0.2, 0.3), reference_inertia(), 3, pulse);
  EXPECT_EQ(t.large_top, 6);
  EXPECT_LT(t.boundary_population, 1e-6);
  EXPECT_LT(t.max_difference, 1e-6);
  EXPECT_THROW(truncation_sanity(Dipole(0, 0, 1), reference_inertia(), 1, pulse), std::invalid_argument);
}
