#ifndef SYMTOP_SPECTRUM_H_
#define SYMTOP_SPECTRUM_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "symtop/basis.h"

namespace symtop {

/// Moments of inertia of a symmetric top (I1 = I2).
struct Inertia {
  double i2 = 1.0;
  double i3 = 1.0;
  /// The caller asserts that I2/I3 is irrational. Exact resonance
  /// classification is only meaningful under that assumption.
  bool resonance_exact = true;

  Inertia() = default;
  Inertia(double i2, double i3, bool resonance_exact = true);

  /// Coefficient of k^2 in the energy, 1/(2 I3) - 1/(2 I2).
  double anisotropy() const { return 0.5 / i3 - 0.5 / i2; }
};

/// E_k^j = j(j+1)/(2 I2) + (1/(2 I3) - 1/(2 I2)) k^2. Throws on |k| > j.
double energy(const Inertia& inertia, int j, int k);

/// Spectral gap q1/I2 + q2 (1/(2 I3) - 1/(2 I2)) held by its integer
/// coordinates. q1 = Δ[l(l+1)]/2 and q2 = Δ[k^2] are always integers.
struct GapCoeff {
  std::int64_t q1 = 0;
  std::int64_t q2 = 0;
  double value = 0.0;

  /// Equality up to sign, exact under the irrational-ratio assumption.
  bool equals(const GapCoeff& other) const {
    return (q1 == other.q1 && q2 == other.q2) || (q1 == -other.q1 && q2 == -other.q2);
  }
  bool is_zero() const { return q1 == 0 && q2 == 0; }
  /// Representative with q1 > 0, or q1 = 0 and q2 >= 0.
  GapCoeff canonical() const;
  /// Signed gap E(to) - E(from) for the coordinates as stored.
  double signed_value(const Inertia& inertia) const;
};

/// Gap of the transition (j, k) -> (j', k').
GapCoeff gap(const Inertia& inertia, int j, int k, int j2, int k2);
GapCoeff gap(const Inertia& inertia, const BasisIndex& from, const BasisIndex& to);

/// lambda_k^j = |E_{k+1}^{j+1} - E_k^j|, coordinates (j+1, 2k+1).
GapCoeff lambda_gap(const Inertia& inertia, int j, int k);
/// eta_k = |E_{k+1}^j - E_k^j|, coordinates (0, 2k+1).
GapCoeff eta_gap(const Inertia& inertia, int k);
/// sigma^j = |E_k^{j+1} - E_k^j|, coordinates (j+1, 0).
GapCoeff sigma_gap(const Inertia& inertia, int j);

std::string describe(const GapCoeff& g);

enum class TransitionRegion { kInside, kBoundary, kOutside };

struct Transition {
  BasisIndex from;
  BasisIndex to;
  TransitionRegion region = TransitionRegion::kInside;
};

/// Every pair of states with |Δl|, |Δk|, |Δm| <= 1 and levels <= j_max,
/// each unordered pair listed once.
std::vector<std::pair<BasisIndex, BasisIndex>> selection_rule_pairs(int j_max);

struct ResonanceReport {
  int j = 0;
  int j_max = 0;
  GapCoeff gap;
  std::vector<Transition> transitions;
  bool xi0 = false;  // no resonant transition leaves the block
  bool xi1 = false;  // no resonant transition crosses the block boundary

  std::size_t count(TransitionRegion region) const;
};

/// Resonant transitions of `sigma` relative to the block of levels {j, j+1}.
/// Requires inertia.resonance_exact and j_max >= j + 2.
ResonanceReport classify_resonances(const Inertia& inertia, int j, const GapCoeff& sigma,
                                    int j_max);

nlohmann::json to_json(const GapCoeff& g);
nlohmann::json to_json(const ResonanceReport& report);

struct LemmaCounterexample {
  int part = 0;  // 1: lambda, 2: eta, 3: sigma
  int j = 0;
  int k = 0;
  int j1 = 0;
  int j2 = 0;
  int s = 0;
  int h = 0;
};

struct LemmaCheck {
  bool holds = true;
  std::vector<LemmaCounterexample> counterexamples;
  std::size_t equations_checked = 0;
};

/// Exhaustive check of the three internal-resonance statements for every
/// block j <= j_max - 2. Part 3 is read with s free: sigma^j does not
/// depend on k, so any vertical pair (j, s) -> (j+1, s) realises it.
LemmaCheck verify_lemma_important(const Inertia& inertia, int j_max);

/// The gap families of one block together with their expected membership.
struct BlockGapFamily {
  std::string name;
  GapCoeff gap;
  bool expect_xi0 = false;
  bool expect_xi1 = false;
};

/// lambda_k^j and sigma^j (expected in Xi^0) and eta_k (expected in Xi^1)
/// for k = -j..j.
std::vector<BlockGapFamily> block_gap_families(const Inertia& inertia, int j);

}  // namespace symtop

#endif  // SYMTOP_SPECTRUM_H_
