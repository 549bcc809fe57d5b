#include <cmath>
#include <stdexcept>

#include "symtop/quantum_dynamics.h"

namespace symtop {

using cd = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;

MatrixXcd p3_operator(const StateSpace& space) {
  const auto n = static_cast<Index>(space.size());
  MatrixXcd p = MatrixXcd::Zero(n, n);
  for (Index i = 0; i < n; ++i) p(i, i) = space[static_cast<std::size_t>(i)].k;
  return p;
}

GenuineSymmetryReport detect_genuine_symmetry(const Dipole& dipole, const Inertia& inertia,
                                              int max_block, std::uint64_t seed) {
  if (max_block < 0) throw std::invalid_argument("detect_genuine_symmetry: max_block must be >= 0");
  GenuineSymmetryReport rep;
  for (int j = 0; j <= max_block; ++j) {
    const auto block = block_space(j);
    const auto p3 = p3_operator(block.space);
    std::array<double, 3> norms{};
    for (int l = 1; l <= 3; ++l) {
      const auto b = assemble_block(block, dipole, BasisVariant::wigner(), l).matrix;
      norms[l - 1] = (p3 * b - b * p3).norm();
      rep.max_commutator = std::max(rep.max_commutator, norms[l - 1]);
    }
    rep.commutators.push_back(norms);
  }
  rep.conserved = rep.max_commutator < 1e-12;

  const auto space = StateSpace::levels(0, max_block + 1);
  const auto sys = SystemMatrices::build(space, dipole, inertia);
  const auto p3 = p3_operator(space);
  std::mt19937_64 rng(seed);
  const auto psi0 = QuantumState::random(rng, sys.dim());
  const auto expect = [&p3](const QuantumState& s) { return s.psi.dot(p3 * s.psi).real(); };
  const auto pulse = ControlPulse::random(rng, 8, 1.0, 1.0);
  const auto u = propagator(sys, pulse);
  rep.unitarity_defect = unitarity_defect(u);
  QuantumState s1{u * psi0.psi};
  rep.p3_drift = std::abs(expect(s1) - expect(psi0));
  ControlPulse idle;
  idle.segments.push_back({pulse.total_time(), {0.0, 0.0, 0.0}});
  rep.p3_drift_zero_control = std::abs(expect(propagate(psi0, idle, sys)) - expect(psi0));
  return rep;
}

std::vector<int> wang_parity(const StateSpace& space) {
  std::vector<int> out;
  for (const auto& w : wang_labels(space)) out.push_back((w.j + w.k + w.gamma) % 2);
  return out;
}

ParitySymmetryReport detect_parity_symmetry(const Dipole& dipole, const Inertia& inertia,
                                            int max_block) {
  ParitySymmetryReport rep;
  if (dipole.classify() != DipoleClass::kOrthogonal) {
    rep.status = "not-applicable";
    return rep;
  }
  rep.theta = theta_for_dipole(dipole.d1, dipole.d2, ThetaMode::kImagAxis);
  for (int j = 0; j <= max_block; ++j) {
    const auto block = block_space(j);
    const auto sys =
        SystemMatrices::build(block.space, dipole, inertia, BasisVariant::rotated_wang(rep.theta));
    const auto parity = wang_parity(block.space);
    ParityBlock pb;
    pb.j = j;
    for (int p : parity) (p == 0 ? pb.even_dim : pb.odd_dim) += 1;
    std::vector<MatrixXcd> mats = {sys.hamiltonian({0.0, 0.0, 0.0}), sys.b[0], sys.b[1], sys.b[2]};
    for (const auto& m : mats) {
      for (Index a = 0; a < m.rows(); ++a) {
        for (Index b = 0; b < m.cols(); ++b) {
          if (parity[static_cast<std::size_t>(a)] != parity[static_cast<std::size_t>(b)]) {
            pb.max_cross = std::max(pb.max_cross, std::abs(m(a, b)));
          }
        }
      }
    }
    rep.max_cross = std::max(rep.max_cross, pb.max_cross);
    rep.blocks.push_back(pb);
  }
  rep.status = rep.max_cross < 1e-12 ? "conserved" : "broken";
  return rep;
}

RestrictedResult restricted_Sk_check(int k, int j_max, const Dipole& dipole, const Inertia& inertia,
                                     const ClosureOptions& options) {
  if (dipole.classify() != DipoleClass::kGenuine) {
    throw std::invalid_argument("restricted S_k check requires a genuine dipole");
  }
  if (std::abs(k) > j_max) throw std::invalid_argument("restricted S_k check: |k| exceeds J_max");
  RestrictedResult out;
  out.k = k;
  out.m_tracker = true;
  for (int j = std::abs(k); j <= j_max - 1; ++j) {
    const auto space = StateSpace::fixed_k(k, j, j + 1);
    const auto labels = energy_labels(space);
    const auto sigma = sigma_gap(inertia, j);
    std::vector<MatrixXcd> gens;
    for (int l = 1; l <= 3; ++l) {
      const auto ib = assemble_block(space, dipole, BasisVariant::wigner(), l).ib();
      const auto masked = extract_gap(sigma, ib, labels, inertia);
      if (masked.cwiseAbs().maxCoeff() <= 1e-14 * std::abs(dipole.d3)) continue;
      for (const cd xi : {cd(1, 0), cd(0, 1)}) gens.push_back(apply_W(xi, masked, labels, inertia));
    }
    const auto span = lie_closure(gens, options);
    RestrictedBlock b;
    b.j = j;
    b.n = static_cast<Index>(space.size());
    b.su_dim = static_cast<std::size_t>(b.n * b.n - 1);
    b.reached_dim = span.dim();
    b.generators = gens.size();
    if (span.status() == ClosureStatus::kIncomplete) {
      b.status = "incomplete";
    } else {
      b.status = b.reached_dim == b.su_dim ? "su" : "proper";
    }
    out.m_tracker = out.m_tracker && b.status == "su";
    out.blocks.push_back(b);
  }
  // Consecutive blocks share level j + 1, so the block graph is a path.
  out.graph_linear = !out.blocks.empty();
  out.m_tracker = out.m_tracker && out.graph_linear;
  return out;
}

nlohmann::json to_json(const RestrictedResult& r) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back({{"j", b.j},
                      {"n", b.n},
                      {"su_dim", b.su_dim},
                      {"reached_dim", b.reached_dim},
                      {"generators", b.generators},
                      {"status", b.status}});
  }
  return {{"k", r.k},
          {"blocks", blocks},
          {"graph_linear", r.graph_linear},
          {"verdict", r.m_tracker ? "MTracker on S_k" : "Inconclusive"}};
}

}  // namespace symtop
