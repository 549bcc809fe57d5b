#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "symtop/quantum_dynamics.h"

namespace symtop {

using cd = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;

namespace {

struct RunOutput {
  Eigen::VectorXcd psi;
  MatrixXcd u;
  std::vector<TraceSample> trace;
};

// Drives the sequence with u3 = 2 eps cos(w t + phase), sampled at step midpoints.
RunOutput run_sequence(const SystemMatrices& sys, const std::vector<ThreeWaveSegment>& segs,
                       const Eigen::VectorXcd& psi0, int steps_per_period, bool keep_unitary,
                       const std::vector<Index>& tracked, bool record, double eps) {
  RunOutput out;
  out.psi = psi0;
  if (keep_unitary) out.u = MatrixXcd::Identity(sys.dim(), sys.dim());
  const auto sample = [&](double t) {
    TraceSample s;
    s.t = t;
    for (Index i : tracked) s.populations.push_back(std::norm(out.psi(i)));
    out.trace.push_back(std::move(s));
  };
  double t = 0.0;
  if (record) sample(t);
  for (const auto& seg : segs) {
    const double period = 2.0 * std::numbers::pi / seg.frequency;
    const auto steps = static_cast<long>(std::ceil(seg.duration / (period / steps_per_period)));
    const double dt = seg.duration / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
      const double u3 = 2.0 * eps * std::cos(seg.frequency * (t + 0.5 * dt) + seg.phase);
      const auto step = segment_propagator(sys, {0.0, 0.0, u3}, dt);
      out.psi = step * out.psi;
      if (keep_unitary) out.u = (step * out.u).eval();
      t += dt;
      if (record && (s + 1) % steps_per_period == 0) sample(t);
    }
  }
  if (record) sample(t);
  return out;
}

}  // namespace

ThreeWaveResult three_wave_mixing_demo(int j, int k, int m, const Dipole& dipole, const Inertia& inertia,
                                       const ThreeWaveOptions& options) {
  if (k == 0) throw std::invalid_argument("three_wave: k must be nonzero");
  if (j < 0 || std::abs(k) > j || std::abs(m) > j) {
    throw std::invalid_argument("three_wave: need |k| <= j and |m| <= j");
  }
  if (!(options.eps > 0.0) || options.steps_per_period < 4 || options.phases < 1 ||
      !(options.fallback_duration > 0.0)) {
    throw std::invalid_argument("three_wave: invalid options");
  }
  const int top = options.top_level < 0 ? j + 2 : options.top_level;
  if (top < j + 1) throw std::invalid_argument("three_wave: top level must be >= j + 1");

  ThreeWaveResult res;
  res.j = j;
  res.k = k;
  res.m = m;
  res.options = options;
  res.options.top_level = top;

  const auto space = StateSpace::fixed_m(m, std::abs(m), top);
  const auto sys = SystemMatrices::build(space, dipole, inertia);
  const auto at = [&space, m](int jj, int kk) {
    return static_cast<Index>(*space.position(make_index(jj, kk, m)));
  };
  const BasisIndex a = make_index(j, k, m);
  const BasisIndex c = make_index(j + 1, k, m);
  const BasisIndex b = make_index(j + 1, k + 1, m);
  res.tracked = {a, make_index(j, -k, m), c, make_index(j + 1, -k, m), b, make_index(j + 1, -k - 1, m)};
  std::vector<Index> tracked;
  for (const auto& t : res.tracked) tracked.push_back(at(t.j, t.k));

  const auto make_segment = [&](std::string name, const BasisIndex& from, const BasisIndex& to,
                                double area) {
    ThreeWaveSegment s;
    s.name = std::move(name);
    s.frequency = std::abs(energy(inertia, to.j, to.k) - energy(inertia, from.j, from.k));
    s.coupling = std::abs(sys.b[2](at(from.j, from.k), at(to.j, to.k)));
    s.area = area;
    s.duration = s.coupling > 1e-14 ? area / (2.0 * options.eps * s.coupling) : options.fallback_duration;
    return s;
  };
  res.segments = {make_segment("sigma", a, c, std::numbers::pi / 2),
                  make_segment("eta", c, b, std::numbers::pi),
                  make_segment("lambda", a, b, std::numbers::pi / 2)};
  for (const auto& s : res.segments) {
    if (!(s.frequency > 0.0)) throw std::domain_error("three_wave: degenerate transition " + s.name);
  }

  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(sys.dim());
  psi0(tracked[0]) = 1.0 / std::sqrt(2.0);
  psi0(tracked[1]) = 1.0 / std::sqrt(2.0);

  const auto branches = [&](const Eigen::VectorXcd& psi) {
    double plus = 0.0, minus = 0.0;
    for (Index i = 0; i < sys.dim(); ++i) {
      const int kk = space[static_cast<std::size_t>(i)].k;
      if (kk == k) plus += std::norm(psi(i));
      if (kk == -k) minus += std::norm(psi(i));
    }
    return std::pair{plus, minus};
  };

  double best = -1.0;
  for (int p = 0; p < options.phases; ++p) {
    auto segs = res.segments;
    segs[2].phase = 2.0 * std::numbers::pi * p / options.phases;
    const auto run = run_sequence(sys, segs, psi0, options.steps_per_period, false, {}, false, options.eps);
    const auto [plus, minus] = branches(run.psi);
    if (std::abs(plus - minus) > best + 1e-15) {
      best = std::abs(plus - minus);
      res.best_phase = segs[2].phase;
    }
  }
  res.segments[2].phase = res.best_phase;
  const auto run =
      run_sequence(sys, res.segments, psi0, options.steps_per_period, true, tracked, true, options.eps);
  const auto [plus, minus] = branches(run.psi);
  res.branch_plus = plus;
  res.branch_minus = minus;
  res.branch_asymmetry = std::abs(plus - minus);
  res.state_plus = std::norm(run.psi(tracked[0]));
  res.state_minus = std::norm(run.psi(tracked[1]));
  res.state_asymmetry = std::abs(res.state_plus - res.state_minus);
  for (Index i = 0; i < sys.dim(); ++i) {
    if (space[static_cast<std::size_t>(i)].j == top) res.boundary_population += std::norm(run.psi(i));
  }
  res.unitarity_defect = unitarity_defect(run.u);
  res.trace = run.trace;
  return res;
}

nlohmann::json to_json(const ThreeWaveResult& r) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : r.segments) {
    segs.push_back({{"name", s.name},
                    {"frequency", s.frequency},
                    {"coupling", s.coupling},
                    {"area", s.area},
                    {"duration", s.duration},
                    {"phase", s.phase}});
  }
  nlohmann::json tracked = nlohmann::json::array();
  for (const auto& t : r.tracked) tracked.push_back(to_string(t));
  return {{"j", r.j},
          {"k", r.k},
          {"m", r.m},
          {"eps", r.options.eps},
          {"steps_per_period", r.options.steps_per_period},
          {"top_level", r.options.top_level},
          {"segments", segs},
          {"best_phase", r.best_phase},
          {"branch_plus", r.branch_plus},
          {"branch_minus", r.branch_minus},
          {"branch_asymmetry", r.branch_asymmetry},
          {"state_plus", r.state_plus},
          {"state_minus", r.state_minus},
          {"state_asymmetry", r.state_asymmetry},
          {"boundary_population", r.boundary_population},
          {"unitarity_defect", r.unitarity_defect},
          {"tracked", tracked}};
}

void write_trace_csv(std::ostream& os, const ThreeWaveResult& r) {
  os << "t";
  for (const auto& t : r.tracked) os << ",\"P" << to_string(t) << "\"";
  os << "\n";
  char buf[32];
  for (const auto& s : r.trace) {
    std::snprintf(buf, sizeof buf, "%.17g", s.t);
    os << buf;
    for (double p : s.populations) {
      std::snprintf(buf, sizeof buf, "%.17g", p);
      os << "," << buf;
    }
    os << "\n";
  }
}

}  // namespace symtop
