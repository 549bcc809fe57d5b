#include "symtop/classical.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "symtop/parallel.h"

namespace symtop {

namespace {

template <class T>
using Quat = std::array<T, 4>;
template <class T>
using Vec3 = std::array<T, 3>;

template <class T>
Quat<T> qmul(const Quat<T>& a, const Quat<T>& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T>
std::array<T, kVars> drift_components(const Quat<T>& q, const Vec3<T>& p, const Inertia& in) {
  const Vec3<T> bp{p[0] * (1.0 / in.i2), p[1] * (1.0 / in.i2), p[2] * (1.0 / in.i3)};
  const auto qd = qmul(q, Quat<T>{T(0.0), bp[0], bp[1], bp[2]});
  const auto pd = cross(p, bp);
  return {qd[0], qd[1], qd[2], qd[3], pd[0], pd[1], pd[2]};
}

template <class T>
std::array<T, kVars> control_components(const Quat<T>& q, const Dipole& d, int l) {
  if (l < 1 || l > 3) throw std::out_of_range("control field index must be 1, 2 or 3");
  Quat<T> e{T(0.0), T(0.0), T(0.0), T(0.0)};
  e[static_cast<std::size_t>(l)] = T(1.0);
  const Quat<T> qc{q[0], -q[1], -q[2], -q[3]};
  const auto v = qmul(qmul(qc, e), q);
  const auto pd = cross(Vec3<T>{v[1], v[2], v[3]}, Vec3<T>{T(d.d1), T(d.d2), T(d.d3)});
  return {T(0.0), T(0.0), T(0.0), T(0.0), pd[0], pd[1], pd[2]};
}

Quat<double> quat_of(const Point& x) { return {x(0), x(1), x(2), x(3)}; }
Vec3<double> mom_of(const Point& x) { return {x(4), x(5), x(6)}; }

Point to_point(const std::array<double, kVars>& a) {
  Point v;
  for (int i = 0; i < kVars; ++i) v(i) = a[static_cast<std::size_t>(i)];
  return v;
}

Point vector_field(const Point& x, const std::array<double, 3>& u, const BodyParams& params) {
  const auto q = quat_of(x);
  Point v = to_point(drift_components(q, mom_of(x), params.inertia));
  for (int l = 1; l <= 3; ++l) {
    if (u[l - 1] != 0.0) v += u[l - 1] * to_point(control_components(q, params.dipole, l));
  }
  return v;
}

Quat<Polynomial> poly_quat() {
  return {Polynomial::variable(0), Polynomial::variable(1), Polynomial::variable(2),
          Polynomial::variable(3)};
}

Vec3<Polynomial> poly_mom() {
  return {Polynomial::variable(4), Polynomial::variable(5), Polynomial::variable(6)};
}

PolyField to_field(std::array<Polynomial, kVars> a) {
  PolyField f;
  for (int i = 0; i < kVars; ++i) f[i] = std::move(a[static_cast<std::size_t>(i)]);
  return f;
}

int rank_of(const Eigen::MatrixXd& m, double rel_tol, std::vector<double>* sv) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (sv) sv->assign(s.data(), s.data() + s.size());
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}

// Columns with their q-part projected onto T_q S^3.
Eigen::MatrixXd tangent_columns(const ClassicalState& s, const std::vector<Tangent>& cols) {
  Eigen::Vector4d q(s.q[0], s.q[1], s.q[2], s.q[3]);
  q.normalize();
  Eigen::MatrixXd m(kVars, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    Tangent v = cols[c];
    const double n = q.dot(v.head<4>());
    v.head<4>() -= n * q;
    m.col(static_cast<Eigen::Index>(c)) = v;
  }
  return m;
}

template <std::size_t N>
std::vector<Tangent> evaluate_all(const std::array<PolyField, N>& fs, const Point& x) {
  std::vector<Tangent> out;
  for (const auto& f : fs) out.push_back(evaluate(f, x));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ClassicalState ClassicalState::make(const std::array<double, 4>& q, const std::array<double, 3>& p) {
  ClassicalState s;
  s.q = q;
  s.p = p;
  if (!(std::abs(s.quaternion_norm() - 1.0) <= 1e-10)) {
    throw std::invalid_argument("ClassicalState: quaternion is not unit");
  }
  return s;
}

ClassicalState ClassicalState::normalized(const std::array<double, 4>& q, const std::array<double, 3>& p) {
  ClassicalState s;
  s.q = q;
  s.p = p;
  const double n = s.quaternion_norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("ClassicalState: zero quaternion");
  for (auto& v : s.q) v /= n;
  return s;
}

ClassicalState ClassicalState::random(std::mt19937_64& rng, double p_box) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-p_box, p_box);
  std::array<double, 4> q{};
  do {
    for (auto& v : q) v = g(rng);
  } while (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3] < 1e-12);
  std::array<double, 3> p{};
  for (auto& v : p) v = u(rng);
  return normalized(q, p);
}

Point ClassicalState::coords() const {
  Point x;
  x << q[0], q[1], q[2], q[3], p[0], p[1], p[2];
  return x;
}

ClassicalState ClassicalState::from_coords(const Point& x) {
  ClassicalState s;
  s.q = quat_of(x);
  s.p = mom_of(x);
  return s;
}

double ClassicalState::quaternion_norm() const {
  return std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
}

Tangent drift_X(const ClassicalState& s, const BodyParams& params) {
  return to_point(drift_components(s.q, s.p, params.inertia));
}

Tangent control_Y(const ClassicalState& s, const BodyParams& params, int l) {
  return to_point(control_components(s.q, params.dipole, l));
}

PolyField drift_field(const BodyParams& params) {
  return to_field(drift_components(poly_quat(), poly_mom(), params.inertia));
}

PolyField control_field(const BodyParams& params, int l) {
  return to_field(control_components(poly_quat(), params.dipole, l));
}

std::vector<ClassicalSample> integrate(const ClassicalState& s0, const ControlPulse& pulse,
                                       const BodyParams& params, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("integrate: step must be positive");
  pulse.validate();
  std::vector<ClassicalSample> out;
  Point x = s0.coords();
  double t = 0.0;
  out.push_back({t, s0});
  for (const auto& seg : pulse.segments) {
    const auto n = static_cast<long>(std::ceil(seg.duration / step - 1e-9));
    const double h = seg.duration / static_cast<double>(std::max(1L, n));
    for (long i = 0; i < std::max(1L, n); ++i) {
      const Point k1 = vector_field(x, seg.u, params);
      const Point k2 = vector_field(x + 0.5 * h * k1, seg.u, params);
      const Point k3 = vector_field(x + 0.5 * h * k2, seg.u, params);
      const Point k4 = vector_field(x + h * k3, seg.u, params);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      x.head<4>().normalize();
      t += h;
      out.push_back({t, ClassicalState::from_coords(x)});
    }
  }
  return out;
}

double kinetic_energy(const ClassicalState& s, const Inertia& inertia) {
  return 0.5 * ((s.p[0] * s.p[0] + s.p[1] * s.p[1]) / inertia.i2 + s.p[2] * s.p[2] / inertia.i3);
}

double momentum_norm2(const ClassicalState& s) {
  return s.p[0] * s.p[0] + s.p[1] * s.p[1] + s.p[2] * s.p[2];
}

BracketFamily::BracketFamily(const BodyParams& params, int depth) : depth_(depth) {
  if (depth < 2) throw std::invalid_argument("bracket_rank: depth must be >= 2");
  const PolyField x = drift_field(params);
  const std::array<PolyField, 3> y = {control_field(params, 1), control_field(params, 2),
                                      control_field(params, 3)};
  std::vector<PolyField> level = {x, y[0], y[1], y[2]};
  std::vector<std::string> level_names = {"X", "Y1", "Y2", "Y3"};
  const auto first = level;
  const auto first_names = level_names;
  fields_ = level;
  names_ = level_names;
  for (int d = 2; d <= depth; ++d) {
    std::vector<PolyField> next;
    std::vector<std::string> next_names;
    for (std::size_t a = 0; a < level.size(); ++a) {
      // Depth 2 takes each unordered pair once.
      for (std::size_t b = d == 2 ? a + 1 : 0; b < first.size(); ++b) {
        next.push_back(lie_bracket(level[a], first[b]));
        next_names.push_back("[" + level_names[a] + "," + first_names[b] + "]");
      }
    }
    fields_.insert(fields_.end(), next.begin(), next.end());
    names_.insert(names_.end(), next_names.begin(), next_names.end());
    level = std::move(next);
    level_names = std::move(next_names);
  }
  const PolyField xy1 = lie_bracket(x, y[0]);
  const PolyField xy2 = lie_bracket(x, y[1]);
  const PolyField xy3 = lie_bracket(x, y[2]);
  six_ = {x, y[0], y[1], xy1, xy2, lie_bracket(xy1, y[0])};
  base_ = {x, xy1, xy2, xy3};
  controls_ = y;
  level_set_base_ = {x, xy1, xy2, lie_bracket(xy1, x)};
}

RankReport BracketFamily::evaluate(const ClassicalState& s, double rel_tol) const {
  const Point pt = s.coords();
  RankReport r;
  r.depth = depth_;
  r.fields = fields_.size();
  std::vector<Tangent> cols;
  for (const auto& f : fields_) cols.push_back(symtop::evaluate(f, pt));
  r.rank = tangent_rank(s, cols, rel_tol, &r.singular_values);
  r.six_field_rank = tangent_rank(s, evaluate_all(six_, pt), rel_tol);
  r.base_rank = rank_of(tangent_columns(s, evaluate_all(base_, pt)).topRows(4), rel_tol, nullptr);
  r.control_rank = rank_of(tangent_columns(s, evaluate_all(controls_, pt)).bottomRows(3), rel_tol, nullptr);
  r.level_set_base_rank =
      rank_of(tangent_columns(s, evaluate_all(level_set_base_, pt)).topRows(4), rel_tol, nullptr);
  return r;
}

int tangent_rank(const ClassicalState& s, const std::vector<Tangent>& columns, double rel_tol,
                 std::vector<double>* singular_values) {
  return rank_of(tangent_columns(s, columns), rel_tol, singular_values);
}

RankReport bracket_rank(const ClassicalState& s, const BodyParams& params, int depth) {
  return BracketFamily(params, depth).evaluate(s);
}

SingularFactors singular_factors(const ClassicalState& st, const BodyParams& params) {
  const double i2 = params.inertia.i2;
  const double i3 = params.inertia.i3;
  const double d1 = params.dipole.d1;
  const double d2 = params.dipole.d2;
  const double d3 = params.dipole.d3;
  const auto [q0, q1, q2, q3] = st.q;
  const auto [p1, p2, p3] = st.p;
  SingularFactors f;
  f.s[0] = (i2 - i3) / (32.0 * i2 * i2 * i2 * i3 * i3) * q1;
  f.s[1] = -2 * q1 * q2 * d1 + 2 * q0 * q3 * d1 + q0 * q0 * d2 + q1 * q1 * d2 - (q2 * q2 + q3 * q3) * d2;
  const double t3 = q0 * (-2 * q2 * d1 + 2 * q1 * d2) + 2 * q3 * (q1 * d1 + q2 * d2) +
                    (q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3) * d3;
  f.s[2] = t3 * t3;
  f.s[3] = -2 * (q0 * q2 + q1 * q3) * (d1 * d1 + d2 * d2) +
           ((q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3) * d1 + 2 * (q1 * q2 - q0 * q3) * d2) * d3;
  f.s[4] = p1 * d1 + p2 * d2 + p3 * d3;
  f.product = f.s[0] * f.s[1] * f.s[2] * f.s[3] * f.s[4];
  f.classification = f.product == 0.0 ? "zero" : (f.product > 0.0 ? "positive" : "negative");
  return f;
}

std::size_t RankSurvey::at_most(int r) const {
  std::size_t n = 0;
  for (int i = 0; i <= r && i < 7; ++i) n += histogram[static_cast<std::size_t>(i)];
  return n;
}

RankSurvey rank_survey(const BodyParams& params, const RankSurveyOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<ClassicalState> states;
  RankSurvey out;
  out.min_abs_s = std::numeric_limits<double>::infinity();
  while (states.size() < options.samples && out.draws < options.max_draws) {
    const auto s = ClassicalState::random(rng, options.p_box);
    ++out.draws;
    if (options.s_threshold >= 0.0) {
      const double v = std::abs(singular_factors(s, params).product);
      if (!(v > options.s_threshold)) continue;
      out.min_abs_s = std::min(out.min_abs_s, v);
    }
    states.push_back(s);
  }
  if (options.s_threshold < 0.0) out.min_abs_s = 0.0;
  out.samples = states.size();
  const BracketFamily family(params, options.depth);
  std::vector<int> ranks(states.size());
  parallel_for(states.size(), options.threads,
               [&](std::size_t i) { ranks[i] = family.evaluate(states[i], options.rel_tol).rank; });
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.histogram[static_cast<std::size_t>(std::clamp(ranks[i], 0, 6))] += 1;
    if (std::abs(states[i].p[2]) > 0.0) {
      ++out.p3_nonzero;
      if (ranks[i] == 5) ++out.rank5_p3_nonzero;
    }
  }
  return out;
}

nlohmann::json to_json(const RankReport& r) {
  return {{"depth", r.depth},
          {"fields", r.fields},
          {"rank", r.rank},
          {"singular_values", r.singular_values},
          {"six_field_rank", r.six_field_rank},
          {"base_rank", r.base_rank},
          {"control_rank", r.control_rank},
          {"level_set_base_rank", r.level_set_base_rank}};
}

nlohmann::json to_json(const RankSurvey& r) {
  return {{"samples", r.samples},
          {"draws", r.draws},
          {"rank_histogram", r.histogram},
          {"p3_nonzero", r.p3_nonzero},
          {"rank5_with_p3_nonzero", r.rank5_p3_nonzero},
          {"min_abs_S", r.min_abs_s}};
}

nlohmann::json to_json(const SingularFactors& f) {
  return {{"S", f.s}, {"product", f.product}, {"classification", f.classification}};
}

void write_trajectory_csv(std::ostream& os, const std::vector<ClassicalSample>& trajectory) {
  os << "t,q0,q1,q2,q3,P1,P2,P3,P3_drift\n";
  if (trajectory.empty()) return;
  const double p30 = trajectory.front().state.p[2];
  for (const auto& s : trajectory) {
    os << fmt(s.t);
    for (double v : s.state.q) os << ',' << fmt(v);
    for (double v : s.state.p) os << ',' << fmt(v);
    os << ',' << fmt(s.state.p[2] - p30) << '\n';
  }
}

}  // namespace symtop
