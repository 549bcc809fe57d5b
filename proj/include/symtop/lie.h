#ifndef SYMTOP_LIE_H_
#define SYMTOP_LIE_H_

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "symtop/basis.h"
#include "symtop/coupling.h"
#include "symtop/spectrum.h"

namespace symtop {

enum class PauliKind { kG, kF, kD };

/// Generalised Pauli matrices on n states:
/// G = e_ab - e_ba, F = i e_ab + i e_ba, D = i e_aa - i e_bb.
Eigen::MatrixXcd pauli(PauliKind kind, Eigen::Index n, Eigen::Index a, Eigen::Index b);

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Rotational level (j, |k|) of each basis element; energies depend on
/// nothing else, in every basis variant.
struct EnergyLabel {
  int j = 0;
  int k = 0;
};

std::vector<EnergyLabel> energy_labels(const StateSpace& space);
std::vector<EnergyLabel> energy_labels(const std::vector<WangLabel>& labels);

/// E_sigma: keeps entry (a, b) iff the exact gap between a and b equals sigma.
Eigen::MatrixXcd extract_gap(const GapCoeff& sigma, const Eigen::MatrixXcd& m,
                             const std::vector<EnergyLabel>& labels, const Inertia& inertia);

/// W_xi: entry (a, b) times xi if E_a < E_b, times conj(xi) if E_a > E_b,
/// zero if the two levels are degenerate.
Eigen::MatrixXcd apply_W(std::complex<double> xi, const Eigen::MatrixXcd& m,
                         const std::vector<EnergyLabel>& labels, const Inertia& inertia);

struct ExcitedMode {
  GapCoeff gap;
  int field = 1;
  std::complex<double> xi{1.0, 0.0};
  bool strong = false;  // (gap, field) in Xi^0
  Eigen::MatrixXcd matrix;
};

struct ExcitedModeSet {
  int j = 0;
  int window = 0;  // levels used for the exact classification
  std::vector<ExcitedMode> modes1;
  std::vector<ExcitedMode> modes0;

  std::vector<Eigen::MatrixXcd> matrices0() const;
  std::vector<Eigen::MatrixXcd> matrices1() const;
};

/// nu_j^1 = { W_xi(E_sigma(i B_l)) : (sigma, l) in Xi_j^1, xi in {1, i} }
/// and its subset nu_j^0 with (sigma, l) in Xi_j^0, on the block M_j in the
/// Wigner basis. Zero masks are dropped. `window` defaults to j + 3.
ExcitedModeSet excited_modes(int j, const Dipole& dipole, const Inertia& inertia, int window = -1);

struct ClosureOptions {
  double tol = 1e-9;
  std::size_t max_dim = 0;  // 0 means n^2 - 1
  std::size_t max_brackets = 0;  // 0 means unlimited
  std::size_t batch = 64;
};

enum class ClosureStatus { kComplete, kIncomplete };

/// Orthonormal basis (under Re tr(A^* B)) of a real subspace of su(n).
class LieSpan {
 public:
  LieSpan() = default;
  LieSpan(Eigen::Index n, double tol);

  Eigen::Index n() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  double tol() const { return tol_; }
  ClosureStatus status() const { return status_; }
  std::size_t brackets() const { return brackets_; }
  const std::vector<Eigen::MatrixXcd>& basis() const { return basis_; }
  const std::vector<Eigen::MatrixXcd>& generators() const { return generators_; }

  /// Norm of the component of m orthogonal to the span, relative to |m|.
  double residual(const Eigen::MatrixXcd& m) const;
  bool contains(const Eigen::MatrixXcd& m) const { return residual(m) <= tol_; }
  Eigen::MatrixXd gram() const;

  nlohmann::json summary() const;

 private:
  friend class SpanBuilder;
  Eigen::Index n_ = 0;
  double tol_ = 1e-9;
  ClosureStatus status_ = ClosureStatus::kComplete;
  std::size_t brackets_ = 0;
  std::vector<Eigen::MatrixXcd> basis_;
  std::vector<Eigen::MatrixXcd> generators_;
  Eigen::MatrixXd coords_;  // one orthonormal row per basis element
};

/// Real coordinates of a skew-Hermitian matrix, isometric for Re tr(A^* B).
Eigen::VectorXd su_coordinates(const Eigen::MatrixXcd& a);
Eigen::MatrixXcd from_su_coordinates(const Eigen::VectorXd& v, Eigen::Index n);

/// Smallest real Lie algebra containing the generators. Throws on input
/// that is not traceless skew-Hermitian.
LieSpan lie_closure(const std::vector<Eigen::MatrixXcd>& generators,
                    const ClosureOptions& options = {});

/// Smallest subspace of `ambient` containing nu0 and stable under ad of the
/// ambient algebra. Throws std::logic_error if nu0 is not inside `ambient`.
LieSpan minimal_ideal(const std::vector<Eigen::MatrixXcd>& nu0, const LieSpan& ambient,
                      const ClosureOptions& options = {});

/// Smallest subspace containing nu0 and stable under ad of `ad_generators`.
LieSpan ideal_closure(const std::vector<Eigen::MatrixXcd>& nu0,
                      const std::vector<Eigen::MatrixXcd>& ad_generators,
                      const ClosureOptions& options = {});

enum class VerdictKind { kMTracker, kSymmetryBlocked, kInconclusive };

std::string to_string(VerdictKind v);

struct BlockResult {
  int j = 0;
  Eigen::Index n = 0;
  std::size_t su_dim = 0;
  std::size_t reached_dim = 0;
  std::string status;  // "su", "proper", "incomplete", "skipped"
  std::size_t nu0 = 0;
  std::size_t nu1 = 0;
  double seconds = 0.0;
};

struct Verdict {
  VerdictKind kind = VerdictKind::kInconclusive;
  std::string detail;
  std::vector<BlockResult> blocks;
  bool graph_connected = false;
  int j_max = 0;

  std::string label() const;
};

nlohmann::json to_json(const Verdict& v);

struct LgtcOptions {
  ClosureOptions closure;
  int max_block = 1;  // blocks with larger j need allow_large_blocks
  bool allow_large_blocks = false;
  bool run_detectors = true;
  unsigned threads = 1;
  unsigned seed = 1;
};

/// Block-wise Lie-Galerkin tracking test on blocks j = 0 .. j_max - 1.
Verdict lgtc_verdict(int j_max, const Dipole& dipole, const Inertia& inertia,
                     const LgtcOptions& options = {});

/// True when the graph with vertices I_j = levels {j, j+1} and edges for
/// non-empty intersections is connected.
bool block_graph_connected(int j_max);

}  // namespace symtop

#endif  // SYMTOP_LIE_H_
