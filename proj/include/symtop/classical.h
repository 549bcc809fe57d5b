#ifndef SYMTOP_CLASSICAL_H_
#define SYMTOP_CLASSICAL_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "symtop/coupling.h"
#include "symtop/polynomial.h"
#include "symtop/quantum_dynamics.h"
#include "symtop/spectrum.h"

namespace symtop {

/// Attitude quaternion q = q0 + i q1 + j q2 + k q3 and body angular momentum P.
struct ClassicalState {
  std::array<double, 4> q{1.0, 0.0, 0.0, 0.0};
  std::array<double, 3> p{0.0, 0.0, 0.0};

  /// Throws std::invalid_argument unless |q| = 1 within 1e-10.
  static ClassicalState make(const std::array<double, 4>& q, const std::array<double, 3>& p);
  /// Normalises q first; throws on q = 0.
  static ClassicalState normalized(const std::array<double, 4>& q, const std::array<double, 3>& p);
  /// q uniform on S^3, P uniform in the box [-p_box, p_box]^3.
  static ClassicalState random(std::mt19937_64& rng, double p_box = 1.0);

  Point coords() const;
  static ClassicalState from_coords(const Point& x);
  double quaternion_norm() const;
};

struct BodyParams {
  Inertia inertia;
  Dipole dipole;
};

/// Tangent vector in the ambient coordinates (qdot, Pdot).
using Tangent = Point;

/// X = (q beta P, P x beta P).
Tangent drift_X(const ClassicalState& s, const BodyParams& params);
/// Y_l = (0, (conj(q) e_l q) x delta), l in {1, 2, 3}.
Tangent control_Y(const ClassicalState& s, const BodyParams& params, int l);

/// The same fields as exact polynomials in the ambient coordinates.
PolyField drift_field(const BodyParams& params);
PolyField control_field(const BodyParams& params, int l);

struct ClassicalSample {
  double t = 0.0;
  ClassicalState state;
};

/// RK4 under a piecewise-constant pulse, renormalising q after every step.
/// Each segment is cut into ceil(duration / step) equal steps; samples are
/// taken at step boundaries, starting with the initial state.
std::vector<ClassicalSample> integrate(const ClassicalState& s0, const ControlPulse& pulse,
                                       const BodyParams& params, double step);

double kinetic_energy(const ClassicalState& s, const Inertia& inertia);
double momentum_norm2(const ClassicalState& s);

struct RankReport {
  int depth = 0;
  std::size_t fields = 0;
  int rank = 0;                       // all brackets up to depth, on T(S^3 x R^3)
  std::vector<double> singular_values;
  int six_field_rank = 0;             // X, Y1, Y2, [X,Y1], [X,Y2], [[X,Y1],Y1]
  int base_rank = 0;                  // S^3 part of X, [X,Y1], [X,Y2], [X,Y3]
  int control_rank = 0;               // R^3 part of Y1, Y2, Y3
  int level_set_base_rank = 0;        // S^3 part of X, [X,Y1], [X,Y2], [[X,Y1],X]
};

/// Iterated brackets of X, Y1, Y2, Y3, built once per parameter set and
/// evaluated at many states.
class BracketFamily {
 public:
  /// Throws std::invalid_argument for depth < 2.
  BracketFamily(const BodyParams& params, int depth = 3);

  int depth() const { return depth_; }
  std::size_t size() const { return fields_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  RankReport evaluate(const ClassicalState& s, double rel_tol = 1e-8) const;

 private:
  int depth_;
  std::vector<PolyField> fields_;
  std::vector<std::string> names_;
  std::array<PolyField, 6> six_;
  std::array<PolyField, 4> base_;
  std::array<PolyField, 3> controls_;
  std::array<PolyField, 4> level_set_base_;
};

RankReport bracket_rank(const ClassicalState& s, const BodyParams& params, int depth = 3);

/// Rank of the columns after projecting the q-part onto T_q S^3.
int tangent_rank(const ClassicalState& s, const std::vector<Tangent>& columns, double rel_tol,
                 std::vector<double>* singular_values = nullptr);

struct SingularFactors {
  std::array<double, 5> s{};
  double product = 0.0;
  std::string classification;  // "zero", "positive" or "negative"
};

/// S1(q) .. S4(q), S5(P) of the six-field determinant.
SingularFactors singular_factors(const ClassicalState& s, const BodyParams& params);

struct RankSurveyOptions {
  std::size_t samples = 1000;
  /// Keep only states with |S(q,P)| above this; negative disables the filter.
  double s_threshold = -1.0;
  std::size_t max_draws = 1000000;
  double p_box = 1.0;
  int depth = 3;
  double rel_tol = 1e-8;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct RankSurvey {
  std::size_t samples = 0;
  std::size_t draws = 0;
  std::array<std::size_t, 7> histogram{};  // states by rank 0..6
  std::size_t p3_nonzero = 0;
  std::size_t rank5_p3_nonzero = 0;
  double min_abs_s = 0.0;

  std::size_t at_rank(int r) const { return histogram[static_cast<std::size_t>(r)]; }
  std::size_t at_most(int r) const;
};

RankSurvey rank_survey(const BodyParams& params, const RankSurveyOptions& options = {});

nlohmann::json to_json(const RankReport& r);
nlohmann::json to_json(const RankSurvey& r);
nlohmann::json to_json(const SingularFactors& f);

/// Columns t, q0..q3, P1..P3, P3 - P3(0).
void write_trajectory_csv(std::ostream& os, const std::vector<ClassicalSample>& trajectory);

}  // namespace symtop

#endif  // SYMTOP_CLASSICAL_H_
