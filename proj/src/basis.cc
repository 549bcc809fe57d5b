#include "symtop/basis.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symtop {

BasisIndex make_index(int j, int k, int m) {
  if (j < 0) throw std::out_of_range("BasisIndex: j must be non-negative, got " + std::to_string(j));
  if (k < -j || k > j) {
    throw std::out_of_range("BasisIndex: k=" + std::to_string(k) + " outside [-j, j] for j=" +
                            std::to_string(j));
  }
  if (m < -j || m > j) {
    throw std::out_of_range("BasisIndex: m=" + std::to_string(m) + " outside [-j, j] for j=" +
                            std::to_string(j));
  }
  return {j, k, m};
}

std::string to_string(const BasisIndex& index) {
  return "(" + std::to_string(index.j) + "," + std::to_string(index.k) + "," +
         std::to_string(index.m) + ")";
}

std::size_t rho(int l, int k, int m) {
  make_index(l, k, m);
  // sum_{l' < l} (2l'+1)^2 = l(2l-1)(2l+1)/3
  const std::size_t below = static_cast<std::size_t>(l) * (2 * l - 1) * (2 * l + 1) / 3;
  return below + static_cast<std::size_t>(k + l) * (2 * l + 1) + static_cast<std::size_t>(m + l);
}

StateSpace::StateSpace(std::vector<BasisIndex> indices) : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const auto& b = indices_[i];
    if (!lookup_.emplace(rho(b.j, b.k, b.m), i).second) {
      throw std::invalid_argument("StateSpace: duplicate index " + to_string(b));
    }
  }
}

StateSpace StateSpace::levels(int lo, int hi) {
  if (lo < 0 || hi < lo) throw std::invalid_argument("StateSpace::levels: need 0 <= lo <= hi");
  std::vector<BasisIndex> out;
  for (int l = lo; l <= hi; ++l)
    for (int k = -l; k <= l; ++k)
      for (int m = -l; m <= l; ++m) out.push_back({l, k, m});
  return StateSpace(std::move(out));
}

StateSpace StateSpace::fixed_k(int k, int lo, int hi) {
  std::vector<BasisIndex> out;
  for (int l = std::max(lo, std::abs(k)); l <= hi; ++l)
    for (int m = -l; m <= l; ++m) out.push_back({l, k, m});
  return StateSpace(std::move(out));
}

StateSpace StateSpace::fixed_m(int m, int lo, int hi) {
  std::vector<BasisIndex> out;
  for (int l = std::max(lo, std::abs(m)); l <= hi; ++l)
    for (int k = -l; k <= l; ++k) out.push_back({l, k, m});
  return StateSpace(std::move(out));
}

std::optional<std::size_t> StateSpace::position(const BasisIndex& index) const {
  if (index.j < 0 || std::abs(index.k) > index.j || std::abs(index.m) > index.j) return std::nullopt;
  auto it = lookup_.find(rho(index.j, index.k, index.m));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

bool StateSpace::closed_under_k_reflection() const {
  return std::all_of(indices_.begin(), indices_.end(),
                     [this](const BasisIndex& b) { return contains({b.j, -b.k, b.m}); });
}

BlockSpace block_space(int j) {
  if (j < 0) throw std::out_of_range("block_space: j must be non-negative");
  return {j, StateSpace::levels(j, j + 1)};
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::kWigner: return "Wigner";
    case BasisKind::kRotatedWigner: return "RotatedWigner";
    case BasisKind::kWang: return "Wang";
    case BasisKind::kRotatedWang: return "RotatedWang";
  }
  return "?";
}

std::vector<WangLabel> wang_labels(const StateSpace& space) {
  if (!space.closed_under_k_reflection()) {
    throw std::invalid_argument("wang_labels: space is not closed under k -> -k");
  }
  std::vector<WangLabel> out;
  for (const auto& b : space) {
    if (b.k < 0) continue;
    if (b.k == 0) {
      out.push_back({b.j, 0, b.m, 0});
    } else {
      out.push_back({b.j, b.k, b.m, 0});
      out.push_back({b.j, b.k, b.m, 1});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXcd change_of_basis(const StateSpace& space, const BasisVariant& variant) {
  const auto n = static_cast<Eigen::Index>(space.size());
  const double theta = variant.is_rotated() ? variant.theta : 0.0;
  auto phase = [theta](int k) { return std::polar(1.0, -k * theta); };

  if (!variant.is_wang()) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) u(i, i) = phase(space[i].k);
    return u;
  }

  const auto labels = wang_labels(space);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  const double s = 1.0 / std::numbers::sqrt2;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const auto& w = labels[c];
    const auto col = static_cast<Eigen::Index>(c);
    if (w.k == 0) {
      u(static_cast<Eigen::Index>(*space.position({w.j, 0, w.m})), col) = 1.0;
      continue;
    }
    const double sign = w.gamma == 0 ? 1.0 : -1.0;
    u(static_cast<Eigen::Index>(*space.position({w.j, w.k, w.m})), col) = s * phase(w.k);
    u(static_cast<Eigen::Index>(*space.position({w.j, -w.k, w.m})), col) = sign * s * phase(-w.k);
  }
  return u;
}

double theta_for_dipole(double d1, double d2, ThetaMode mode) {
  if (d1 == 0.0 && d2 == 0.0) throw std::invalid_argument("theta undefined");
  double theta = std::atan2(d1, d2);
  if (mode == ThetaMode::kImagAxis) theta -= std::numbers::pi / 2;
  theta = std::fmod(theta, 2 * std::numbers::pi);
  if (theta < 0) theta += 2 * std::numbers::pi;
  return theta;
}

}  // namespace symtop
