#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "symtop/classical.h"

using namespace symtop;

namespace {

const Inertia kInertia(1.0, 1.0 / std::sqrt(2.0));
const BodyParams kAccidental{kInertia, Dipole(0.3, 0.4, 0.1)};
const BodyParams kGenuine{kInertia, Dipole(0, 0, 1)};

using Quat = std::array<double, 4>;

Quat hamilton(const Quat& a, const Quat& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quat conj(const Quat& a) { return {a[0], -a[1], -a[2], -a[3]}; }

// Central-difference Jacobian of a field at x.
template <class F>
Eigen::Matrix<double, kVars, kVars> jacobian(F f, const Point& x) {
  Eigen::Matrix<double, kVars, kVars> j;
  const double h = 1e-5;
  for (int c = 0; c < kVars; ++c) {
    Point a = x, b = x;
    a(c) += h;
    b(c) -= h;
    j.col(c) = (f(a) - f(b)) / (2 * h);
  }
  return j;
}

ControlPulse test_pulse(std::uint64_t seed, double total) {
  std::mt19937_64 rng(seed);
  auto p = ControlPulse::random(rng, 6, 1.0, 1.0);
  const double scale = total / p.total_time();
  for (auto& s : p.segments) s.duration *= scale;
  return p;
}

}  // namespace

TEST(Polynomial, Arithmetic) {
  const auto x = Polynomial::variable(0);
  const auto y = Polynomial::variable(4);
  const auto p = x * x * y * 3.0 - y + Polynomial(2.0);
  Point pt;
  pt << 2, 0, 0, 0, 5, 0, 0;
  EXPECT_DOUBLE_EQ(p.evaluate(pt), 3 * 4 * 5 - 5 + 2);
  EXPECT_DOUBLE_EQ(p.derivative(0).evaluate(pt), 6 * 2 * 5);
  EXPECT_EQ(p.degree(), 3);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_THROW(Polynomial::variable(7), std::out_of_range);
}

TEST(Polynomial, LinearFieldBracketIsMatrixCommutator) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-3, 3);
  Eigen::Matrix<double, kVars, kVars> m, n;
  for (int i = 0; i < kVars; ++i)
    for (int j = 0; j < kVars; ++j) {
      m(i, j) = d(rng);
      n(i, j) = d(rng);
    }
  PolyField a, b;
  for (int i = 0; i < kVars; ++i)
    for (int j = 0; j < kVars; ++j) {
      a[i] += Polynomial::variable(j) * m(i, j);
      b[i] += Polynomial::variable(j) * n(i, j);
    }
  Point x = Point::Random();
  // [Mx, Nx] = (N M - M N) x
  EXPECT_LT((evaluate(lie_bracket(a, b), x) - (n * m - m * n) * x).norm(), 1e-12);
}

TEST(Fields, Examples) {
  const BodyParams p{Inertia(2.0, 1.0), Dipole(0, 0, 1)};
  const auto s = ClassicalState::make({1, 0, 0, 0}, {1, 2, 3});
  const auto x = drift_X(s, p);
  EXPECT_NEAR(x(4), 3.0, 1e-15);
  EXPECT_NEAR(x(5), -1.5, 1e-15);
  EXPECT_NEAR(x(6), 0.0, 1e-15);
  const auto y = control_Y(s, p, 1);
  EXPECT_EQ(y.head<4>().norm(), 0.0);
  EXPECT_NEAR((y.tail<3>() - Eigen::Vector3d(0, -1, 0)).norm(), 0.0, 1e-15);
  const BodyParams sphere{Inertia(1.5, 1.5), Dipole(0.1, 0.2, 0.3)};
  EXPECT_LT(drift_X(ClassicalState::make({1, 0, 0, 0}, {0.3, -1, 2}), sphere).tail<3>().norm(), 1e-15);
  EXPECT_THROW(ClassicalState::make({1, 1, 0, 0}, {0, 0, 0}), std::invalid_argument);
}

TEST(Fields, ControlsSpanDipoleComplement) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto s = ClassicalState::random(rng);
    Eigen::Matrix3d m;
    for (int l = 1; l <= 3; ++l) m.col(l - 1) = control_Y(s, kAccidental, l).tail<3>();
    EXPECT_EQ(Eigen::FullPivLU<Eigen::Matrix3d>(m).setThreshold(1e-10).rank(), 2);
    EXPECT_LT((m.transpose() * Eigen::Vector3d(0.3, 0.4, 0.1)).norm(), 1e-14);
    for (int l = 1; l <= 3; ++l) EXPECT_EQ(control_Y(s, kGenuine, l)(6), 0.0);
  }
}

TEST(Fields, PolynomialBracketMatchesFiniteDifferences) {
  const auto xf = drift_field(kAccidental);
  const auto yf = control_field(kAccidental, 2);
  const auto bracket = lie_bracket(xf, yf);
  std::mt19937_64 rng(2);
  const auto s = ClassicalState::random(rng);
  const Point pt = s.coords();
  const auto xfun = [](const Point& p) { return drift_X(ClassicalState::from_coords(p), kAccidental); };
  const auto yfun = [](const Point& p) { return control_Y(ClassicalState::from_coords(p), kAccidental, 2); };
  const Point fd = jacobian(yfun, pt) * xfun(pt) - jacobian(xfun, pt) * yfun(pt);
  EXPECT_LT((evaluate(bracket, pt) - fd).norm(), 1e-8);
  EXPECT_LT((evaluate(xf, pt) - xfun(pt)).norm(), 1e-15);
}

TEST(Integrator, FourthOrder) {
  std::mt19937_64 rng(4);
  const auto s0 = ClassicalState::random(rng);
  const auto pulse = test_pulse(8, 2.0);
  const auto end = [&](double h) { return integrate(s0, pulse, kAccidental, h).back().state.coords(); };
  const Point ref = end(1e-4);
  const double e1 = (end(0.04) - ref).norm();
  const double e2 = (end(0.02) - ref).norm();
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_LT(e1 / e2, 20.0);
}

TEST(Integrator, ConservationLaws) {
  std::mt19937_64 rng(6);
  const auto s0 = ClassicalState::random(rng);
  const auto traj = integrate(s0, test_pulse(3, 10.0), kGenuine, 1e-3);
  EXPECT_NEAR(traj.back().t, 10.0, 1e-9);
  for (const auto& s : traj) {
    EXPECT_LT(std::abs(s.state.p[2] - s0.p[2]), 1e-9);
    EXPECT_LT(std::abs(s.state.quaternion_norm() - 1.0), 1e-10);
  }
  ControlPulse idle;
  idle.segments.push_back({10.0, {0, 0, 0}});
  const auto free = integrate(s0, idle, kAccidental, 1e-3).back().state;
  EXPECT_LT(std::abs(momentum_norm2(free) - momentum_norm2(s0)), 1e-9);
  EXPECT_LT(std::abs(kinetic_energy(free, kInertia) - kinetic_energy(s0, kInertia)), 1e-9);
}

TEST(Integrator, EquivariantUnderRotationAboutE3) {
  std::mt19937_64 rng(12);
  const auto s0 = ClassicalState::random(rng);
  const double c = std::sqrt(0.5);
  const Quat r{c, 0, 0, c};  // quarter turn about e3
  // Controls are relabelled so that sum u'_l conj(r) e_l r = sum u_l e_l.
  Eigen::Matrix3d m;
  for (int l = 0; l < 3; ++l) {
    Quat e{0, 0, 0, 0};
    e[static_cast<std::size_t>(l + 1)] = 1;
    const auto v = hamilton(conj(r), hamilton(e, r));
    m.col(l) << v[1], v[2], v[3];
  }
  const auto pulse = test_pulse(21, 3.0);
  ControlPulse relabelled = pulse;
  for (auto& s : relabelled.segments) {
    const Eigen::Vector3d u = m.transpose() * Eigen::Vector3d(s.u[0], s.u[1], s.u[2]);
    s.u = {u(0), u(1), u(2)};
  }
  const auto rotated = ClassicalState::make(hamilton(r, s0.q), s0.p);
  const auto a = integrate(s0, pulse, kAccidental, 1e-3);
  const auto b = integrate(rotated, relabelled, kAccidental, 1e-3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); i += 100) {
    EXPECT_NEAR(std::sqrt(momentum_norm2(a[i].state)), std::sqrt(momentum_norm2(b[i].state)), 1e-10);
  }
}

TEST(Rank, AccidentalAndGenuine) {
  std::mt19937_64 rng(7);
  const BracketFamily acc(kAccidental, 3);
  const BracketFamily gen(kGenuine, 3);
  EXPECT_EQ(acc.size(), 34u);
  for (int i = 0; i < 20; ++i) {
    const auto s = ClassicalState::random(rng);
    const auto r = acc.evaluate(s);
    if (std::abs(singular_factors(s, kAccidental).product) > 1e-6) {
      EXPECT_EQ(r.rank, 6);
      EXPECT_EQ(r.six_field_rank, 6);
    }
    EXPECT_EQ(r.control_rank, 2);
    const auto g = gen.evaluate(s);
    EXPECT_EQ(g.rank, 5);
  }
  EXPECT_THROW(BracketFamily(kAccidental, 1), std::invalid_argument);
}

TEST(Rank, LowerSemicontinuity) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 1e-6);
  const BracketFamily acc(kAccidental, 3);
  const auto s = ClassicalState::random(rng);
  ASSERT_EQ(acc.evaluate(s).rank, 6);
  for (int i = 0; i < 10; ++i) {
    auto q = s.q;
    auto p = s.p;
    for (auto& v : q) v += g(rng);
    for (auto& v : p) v += g(rng);
    EXPECT_EQ(acc.evaluate(ClassicalState::normalized(q, p)).rank, 6);
  }
}

TEST(SingularFactors, Examples) {
  const auto f = singular_factors(ClassicalState::make({0.5, 0.5, 0.5, 0.5}, {1, 0, 0}), kAccidental);
  EXPECT_NEAR(f.s[4], 0.3, 1e-15);
  const auto z = singular_factors(ClassicalState::make({0.6, 0, 0.8, 0}, {0.2, 0.1, -0.4}), kAccidental);
  EXPECT_EQ(z.s[0], 0.0);
  EXPECT_EQ(z.product, 0.0);
  EXPECT_EQ(z.classification, "zero");
}

TEST(Survey, FilteredStatesAreBracketGenerating) {
  RankSurveyOptions opt;
  opt.samples = 100;
  opt.s_threshold = 1e-6;
  opt.threads = 2;
  const auto acc = rank_survey(kAccidental, opt);
  EXPECT_EQ(acc.samples, 100u);
  EXPECT_EQ(acc.at_rank(6), 100u);
  EXPECT_GT(acc.min_abs_s, 1e-6);
  opt.s_threshold = -1;
  const auto gen = rank_survey(kGenuine, opt);
  EXPECT_EQ(gen.at_most(5), 100u);
}

TEST(Export, TrajectoryCsv) {
  ControlPulse idle;
  idle.segments.push_back({0.01, {0, 0, 0}});
  std::ostringstream os;
  write_trajectory_csv(os, integrate(ClassicalState{}, idle, kGenuine, 1e-3));
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header.rfind("t,q0,q1,q2,q3,P1,P2,P3", 0), 0u);
}
