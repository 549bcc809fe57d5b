#include <cmath>
#include <stdexcept>

#include "symtop/quantum_dynamics.h"

namespace symtop {

using cd = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;

void ControlPulse::validate() const {
  if (!(u_max >= 0.0)) throw std::invalid_argument("ControlPulse: U_max must be non-negative");
  for (const auto& s : segments) {
    if (!(s.duration > 0.0)) throw std::invalid_argument("ControlPulse: durations must be positive");
    for (double v : s.u) {
      if (!(std::abs(v) <= u_max)) throw std::invalid_argument("ControlPulse: |u_l| exceeds U_max");
    }
  }
}

double ControlPulse::total_time() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

ControlPulse ControlPulse::random(std::mt19937_64& rng, int segments, double u_max,
                                  double max_duration) {
  std::uniform_real_distribution<double> amp(-u_max, u_max);
  std::uniform_real_distribution<double> dur(0.1 * max_duration, max_duration);
  ControlPulse p;
  p.u_max = u_max;
  for (int i = 0; i < segments; ++i) {
    PulseSegment s;
    s.duration = dur(rng);
    for (auto& v : s.u) v = amp(rng);
    p.segments.push_back(s);
  }
  return p;
}

SystemMatrices SystemMatrices::build(const StateSpace& space, const Dipole& dipole,
                                     const Inertia& inertia, const BasisVariant& variant) {
  SystemMatrices sys;
  sys.space = space;
  sys.variant = variant;
  sys.labels = variant.is_wang() ? energy_labels(wang_labels(space)) : energy_labels(space);
  sys.energies.resize(static_cast<Index>(sys.labels.size()));
  for (std::size_t i = 0; i < sys.labels.size(); ++i) {
    sys.energies(static_cast<Index>(i)) = energy(inertia, sys.labels[i].j, sys.labels[i].k);
  }
  for (int l = 1; l <= 3; ++l) sys.b[l - 1] = assemble_block(space, dipole, variant, l).matrix;
  return sys;
}

MatrixXcd SystemMatrices::hamiltonian(const std::array<double, 3>& u) const {
  MatrixXcd h = energies.cast<cd>().asDiagonal();
  for (int l = 0; l < 3; ++l) {
    if (u[l] != 0.0) h += u[l] * b[l];
  }
  return h;
}

QuantumState QuantumState::basis_state(Index dim, Index i) {
  if (i < 0 || i >= dim) throw std::out_of_range("basis_state: index outside the space");
  QuantumState s;
  s.psi = Eigen::VectorXcd::Zero(dim);
  s.psi(i) = 1.0;
  return s;
}

QuantumState QuantumState::random(std::mt19937_64& rng, Index dim) {
  std::normal_distribution<double> g;
  QuantumState s;
  s.psi.resize(dim);
  for (Index i = 0; i < dim; ++i) s.psi(i) = cd(g(rng), g(rng));
  s.psi.normalize();
  return s;
}

MatrixXcd segment_propagator(const SystemMatrices& sys, const std::array<double, 3>& u, double dt) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sys.hamiltonian(u));
  if (es.info() != Eigen::Success) throw std::runtime_error("segment_propagator: eigensolver failed");
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * dt);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixXcd propagator(const SystemMatrices& sys, const ControlPulse& pulse) {
  pulse.validate();
  MatrixXcd u = MatrixXcd::Identity(sys.dim(), sys.dim());
  for (const auto& s : pulse.segments) u = (segment_propagator(sys, s.u, s.duration) * u).eval();
  return u;
}

QuantumState propagate(const QuantumState& state, const ControlPulse& pulse, const SystemMatrices& sys) {
  if (state.psi.size() != sys.dim()) throw std::invalid_argument("propagate: dimension mismatch");
  pulse.validate();
  QuantumState out = state;
  for (const auto& s : pulse.segments) out.psi = segment_propagator(sys, s.u, s.duration) * out.psi;
  return out;
}

double unitarity_defect(const MatrixXcd& u) {
  return (u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols())).norm();
}

TruncationCheck truncation_sanity(const Dipole& dipole, const Inertia& inertia, int top,
                                  const ControlPulse& pulse) {
  if (top < 2) throw std::invalid_argument("truncation_sanity: top level must be >= 2");
  TruncationCheck out;
  out.small_top = top;
  out.large_top = 2 * top;
  const auto small = SystemMatrices::build(StateSpace::levels(0, top), dipole, inertia);
  const auto large = SystemMatrices::build(StateSpace::levels(0, 2 * top), dipole, inertia);
  const auto ps = propagate(QuantumState::basis_state(small.dim(), 0), pulse, small).populations();
  const auto pl = propagate(QuantumState::basis_state(large.dim(), 0), pulse, large).populations();
  for (Index i = 0; i < small.dim(); ++i) {
    const auto& b = small.space[static_cast<std::size_t>(i)];
    if (b.j <= 1) out.max_difference = std::max(out.max_difference, std::abs(ps(i) - pl(i)));
    if (b.j == top) out.boundary_population += ps(i);
  }
  return out;
}

}  // namespace symtop
