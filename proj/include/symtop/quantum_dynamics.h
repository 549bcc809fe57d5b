#ifndef SYMTOP_QUANTUM_DYNAMICS_H_
#define SYMTOP_QUANTUM_DYNAMICS_H_

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "symtop/basis.h"
#include "symtop/coupling.h"
#include "symtop/lie.h"
#include "symtop/spectrum.h"

namespace symtop {

struct PulseSegment {
  double duration = 0.0;
  std::array<double, 3> u{0.0, 0.0, 0.0};
};

/// Piecewise-constant control with values in the box [-u_max, u_max]^3.
struct ControlPulse {
  std::vector<PulseSegment> segments;
  double u_max = 1.0;

  /// Throws std::invalid_argument on a non-positive duration or |u_l| > u_max.
  void validate() const;
  double total_time() const;

  static ControlPulse random(std::mt19937_64& rng, int segments, double u_max, double max_duration);
};

/// H, B_1, B_2, B_3 on one state space in one basis variant.
struct SystemMatrices {
  StateSpace space;
  BasisVariant variant;
  std::vector<EnergyLabel> labels;
  Eigen::VectorXd energies;
  std::array<Eigen::MatrixXcd, 3> b;

  static SystemMatrices build(const StateSpace& space, const Dipole& dipole, const Inertia& inertia,
                              const BasisVariant& variant = BasisVariant::wigner());
  Eigen::Index dim() const { return energies.size(); }
  Eigen::MatrixXcd hamiltonian(const std::array<double, 3>& u) const;
};

struct QuantumState {
  Eigen::VectorXcd psi;

  static QuantumState basis_state(Eigen::Index dim, Eigen::Index i);
  static QuantumState random(std::mt19937_64& rng, Eigen::Index dim);
  double norm() const { return psi.norm(); }
  Eigen::VectorXd populations() const { return psi.cwiseAbs2(); }
};

/// exp(-i dt (H + sum u_l B_l)) by Hermitian eigendecomposition.
Eigen::MatrixXcd segment_propagator(const SystemMatrices& sys, const std::array<double, 3>& u, double dt);
/// Ordered product of the segment propagators of a pulse.
Eigen::MatrixXcd propagator(const SystemMatrices& sys, const ControlPulse& pulse);
QuantumState propagate(const QuantumState& state, const ControlPulse& pulse, const SystemMatrices& sys);
/// |U^* U - I|_F.
double unitarity_defect(const Eigen::MatrixXcd& u);

/// P3 = diag(k) in the Wigner basis.
Eigen::MatrixXcd p3_operator(const StateSpace& space);

struct GenuineSymmetryReport {
  bool conserved = false;
  double max_commutator = 0.0;
  std::vector<std::array<double, 3>> commutators;  // per block j, per field
  double p3_drift = 0.0;               // along a random pulse
  double p3_drift_zero_control = 0.0;  // under the drift alone
  double unitarity_defect = 0.0;
};

/// |[P3, B_l]|_F on the blocks j <= max_block, plus <P3> drift along a
/// random pulse on levels 0 .. max_block + 1. Conserved iff every
/// commutator norm is below 1e-12.
GenuineSymmetryReport detect_genuine_symmetry(const Dipole& dipole, const Inertia& inertia,
                                              int max_block, std::uint64_t seed = 1);

struct ParityBlock {
  int j = 0;
  std::size_t even_dim = 0;
  std::size_t odd_dim = 0;
  double max_cross = 0.0;
};

struct ParitySymmetryReport {
  std::string status;  // "conserved", "broken" or "not-applicable"
  double theta = 0.0;
  double max_cross = 0.0;
  std::vector<ParityBlock> blocks;
};

/// Parity of j + gamma + k in the rotated Wang basis with the ImagAxis theta.
ParitySymmetryReport detect_parity_symmetry(const Dipole& dipole, const Inertia& inertia,
                                            int max_block);

/// Parity class (0 or 1) of each rotated Wang basis element of `space`.
std::vector<int> wang_parity(const StateSpace& space);

struct RestrictedBlock {
  int j = 0;
  Eigen::Index n = 0;
  std::size_t su_dim = 0;
  std::size_t reached_dim = 0;
  std::size_t generators = 0;
  std::string status;
};

struct RestrictedResult {
  int k = 0;
  std::vector<RestrictedBlock> blocks;
  bool graph_linear = false;
  bool m_tracker = false;
};

/// Closure of the sigma^j excited modes on N_{j,k} = levels {j, j+1} at
/// fixed k, for j = |k| .. j_max - 1. Requires a genuine dipole.
RestrictedResult restricted_Sk_check(int k, int j_max, const Dipole& dipole, const Inertia& inertia,
                                     const ClosureOptions& options = {});
nlohmann::json to_json(const RestrictedResult& r);

struct ThreeWaveOptions {
  double eps = 0.1;
  int steps_per_period = 40;
  int phases = 16;
  int top_level = -1;  // -1 means j + 2
  double fallback_duration = 100.0;
};

struct ThreeWaveSegment {
  std::string name;
  double frequency = 0.0;
  double coupling = 0.0;
  double area = 0.0;
  double duration = 0.0;
  double phase = 0.0;
};

struct TraceSample {
  double t = 0.0;
  std::vector<double> populations;
};

struct ThreeWaveResult {
  int j = 0;
  int k = 0;
  int m = 0;
  std::vector<ThreeWaveSegment> segments;
  double best_phase = 0.0;
  // Populations of the branches S_k and S_{-k}.
  double branch_plus = 0.0;
  double branch_minus = 0.0;
  double branch_asymmetry = 0.0;
  // Populations of the single states (j, k, m) and (j, -k, m).
  double state_plus = 0.0;
  double state_minus = 0.0;
  double state_asymmetry = 0.0;
  double boundary_population = 0.0;
  double unitarity_defect = 0.0;
  std::vector<BasisIndex> tracked;
  std::vector<TraceSample> trace;
  ThreeWaveOptions options;
};

/// Three-wave mixing demo on field 3 in the sector of fixed m: a sigma^j
/// pi/2 pulse on (j,k,m) -> (j+1,k,m), an eta_k pi pulse on
/// (j+1,k,m) -> (j+1,k+1,m), then a lambda_k^j pi/2 pulse on
/// (j,k,m) -> (j+1,k+1,m) whose carrier phase is scanned. Starts from
/// (D_k + D_{-k})/sqrt(2). Throws for k = 0.
ThreeWaveResult three_wave_mixing_demo(int j, int k, int m, const Dipole& dipole, const Inertia& inertia,
                                       const ThreeWaveOptions& options = {});

nlohmann::json to_json(const ThreeWaveResult& r);
void write_trace_csv(std::ostream& os, const ThreeWaveResult& r);

struct TruncationCheck {
  int small_top = 0;
  int large_top = 0;
  double max_difference = 0.0;
  double boundary_population = 0.0;
};

/// Runs the same short pulse on levels <= top and <= 2 top from the ground
/// state and compares populations of levels <= 1.
TruncationCheck truncation_sanity(const Dipole& dipole, const Inertia& inertia, int top,
                                  const ControlPulse& pulse);

}  // namespace symtop

#endif  // SYMTOP_QUANTUM_DYNAMICS_H_
