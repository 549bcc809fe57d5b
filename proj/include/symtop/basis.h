#ifndef SYMTOP_BASIS_H_
#define SYMTOP_BASIS_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace symtop {

/// Rotational state label (j, k, m) of the Wigner function D^j_{k,m}.
/// k is the body-frame projection, m the space-frame projection.
struct BasisIndex {
  int j = 0;
  int k = 0;
  int m = 0;

  auto operator<=>(const BasisIndex&) const = default;
};

/// Builds a BasisIndex, throwing std::out_of_range naming the offending
/// field when |k| > j or |m| > j (or j < 0).
BasisIndex make_index(int j, int k, int m);

std::string to_string(const BasisIndex& index);

/// Position of (l, k, m) in the lexicographic enumeration with l outer,
/// k middle and m inner, each of k and m running over -l..l.
std::size_t rho(int l, int k, int m);

/// Ordered set of Wigner states. Every matrix in the toolkit is expressed
/// in the coordinates of one of these.
class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(std::vector<BasisIndex> indices);

  /// All states with lo <= l <= hi, ordered by rho.
  static StateSpace levels(int lo, int hi);
  /// The states of levels l with lo <= l <= hi and a fixed body projection k.
  static StateSpace fixed_k(int k, int lo, int hi);
  /// The states of levels l with lo <= l <= hi and a fixed space projection m.
  static StateSpace fixed_m(int m, int lo, int hi);

  std::size_t size() const { return indices_.size(); }
  const BasisIndex& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<BasisIndex>& indices() const { return indices_; }
  std::optional<std::size_t> position(const BasisIndex& index) const;
  bool contains(const BasisIndex& index) const { return position(index).has_value(); }

  /// True when (l, -k, m) is present for every (l, k, m).
  bool closed_under_k_reflection() const;

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

 private:
  std::vector<BasisIndex> indices_;
  std::unordered_map<std::size_t, std::size_t> lookup_;
};

/// The block M_j = H_j (+) H_{j+1} used by the block-wise tracking test.
struct BlockSpace {
  int j = 0;
  StateSpace space;

  std::size_t dim() const { return space.size(); }
};

BlockSpace block_space(int j);

enum class BasisKind { kWigner, kRotatedWigner, kWang, kRotatedWang };

/// Choice of orthonormal eigenbasis of the rotational Hamiltonian.
///
/// Rotated kinds multiply D^j_{k,m} by e^{-ik theta}. Wang kinds replace the
/// pair (k, -k), k >= 1, by (D_k + (-1)^gamma D_{-k}) / sqrt(2).
struct BasisVariant {
  BasisKind kind = BasisKind::kWigner;
  double theta = 0.0;

  static BasisVariant wigner() { return {BasisKind::kWigner, 0.0}; }
  static BasisVariant rotated_wigner(double theta) { return {BasisKind::kRotatedWigner, theta}; }
  static BasisVariant wang() { return {BasisKind::kWang, 0.0}; }
  static BasisVariant rotated_wang(double theta) { return {BasisKind::kRotatedWang, theta}; }

  bool is_wang() const { return kind == BasisKind::kWang || kind == BasisKind::kRotatedWang; }
  bool is_rotated() const {
    return kind == BasisKind::kRotatedWigner || kind == BasisKind::kRotatedWang;
  }
};

std::string to_string(BasisKind kind);

/// Label of a Wang state S^j_{k,m,gamma}; k >= 0, gamma = 0 when k = 0.
struct WangLabel {
  int j = 0;
  int k = 0;
  int m = 0;
  int gamma = 0;

  auto operator<=>(const WangLabel&) const = default;
};

/// Wang labels of a k-reflection-closed space, ordered by (l, k, m, gamma).
std::vector<WangLabel> wang_labels(const StateSpace& space);

/// Unitary whose columns are the variant's basis vectors expressed in the
/// Wigner basis of `space`. Wang columns follow wang_labels(space).
Eigen::MatrixXcd change_of_basis(const StateSpace& space, const BasisVariant& variant);

enum class ThetaMode {
  kRealAxis,  // e^{-i theta}(d2 + i d1) is real positive
  kImagAxis,  // e^{-i theta}(d2 + i d1) = i |(d1, d2)|
};

/// Rotation angle in [0, 2 pi) aligning the in-plane dipole component.
/// Throws std::invalid_argument("theta undefined") when d1 = d2 = 0.
double theta_for_dipole(double d1, double d2, ThetaMode mode);

}  // namespace symtop

#endif  // SYMTOP_BASIS_H_
