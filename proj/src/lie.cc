#include "symtop/lie.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "symtop/parallel.h"
#include "symtop/quantum_dynamics.h"

namespace symtop {

using cd = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;

MatrixXcd pauli(PauliKind kind, Index n, Index a, Index b) {
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
    throw std::out_of_range("pauli: indices must be distinct and inside the matrix");
  }
  MatrixXcd m = MatrixXcd::Zero(n, n);
  switch (kind) {
    case PauliKind::kG:
      m(a, b) = 1.0;
      m(b, a) = -1.0;
      break;
    case PauliKind::kF:
      m(a, b) = cd(0, 1);
      m(b, a) = cd(0, 1);
      break;
    case PauliKind::kD:
      m(a, a) = cd(0, 1);
      m(b, b) = cd(0, -1);
      break;
  }
  return m;
}

MatrixXcd commutator(const MatrixXcd& a, const MatrixXcd& b) { return a * b - b * a; }

std::vector<EnergyLabel> energy_labels(const StateSpace& space) {
  std::vector<EnergyLabel> out;
  for (const auto& b : space) out.push_back({b.j, std::abs(b.k)});
  return out;
}

std::vector<EnergyLabel> energy_labels(const std::vector<WangLabel>& labels) {
  std::vector<EnergyLabel> out;
  for (const auto& w : labels) out.push_back({w.j, w.k});
  return out;
}

namespace {

void check_labels(const MatrixXcd& m, const std::vector<EnergyLabel>& labels) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != labels.size()) {
    throw std::invalid_argument("matrix size does not match the energy labels");
  }
}

}  // namespace

MatrixXcd extract_gap(const GapCoeff& sigma, const MatrixXcd& m,
                      const std::vector<EnergyLabel>& labels, const Inertia& inertia) {
  check_labels(m, labels);
  MatrixXcd out = MatrixXcd::Zero(m.rows(), m.cols());
  for (Index a = 0; a < m.rows(); ++a) {
    for (Index b = 0; b < m.cols(); ++b) {
      const auto g = gap(inertia, labels[a].j, labels[a].k, labels[b].j, labels[b].k);
      if (g.equals(sigma)) out(a, b) = m(a, b);
    }
  }
  return out;
}

MatrixXcd apply_W(cd xi, const MatrixXcd& m, const std::vector<EnergyLabel>& labels,
                  const Inertia& inertia) {
  check_labels(m, labels);
  if (std::abs(std::abs(xi) - 1.0) > 1e-12) throw std::invalid_argument("apply_W: |xi| must be 1");
  MatrixXcd out = MatrixXcd::Zero(m.rows(), m.cols());
  for (Index a = 0; a < m.rows(); ++a) {
    for (Index b = 0; b < m.cols(); ++b) {
      const auto g = gap(inertia, labels[a].j, labels[a].k, labels[b].j, labels[b].k);
      if (g.is_zero()) continue;
      out(a, b) = g.signed_value(inertia) > 0 ? xi * m(a, b) : std::conj(xi) * m(a, b);
    }
  }
  return out;
}

std::vector<MatrixXcd> ExcitedModeSet::matrices0() const {
  std::vector<MatrixXcd> out;
  for (const auto& m : modes0) out.push_back(m.matrix);
  return out;
}

std::vector<MatrixXcd> ExcitedModeSet::matrices1() const {
  std::vector<MatrixXcd> out;
  for (const auto& m : modes1) out.push_back(m.matrix);
  return out;
}

ExcitedModeSet excited_modes(int j, const Dipole& dipole, const Inertia& inertia, int window) {
  if (window < 0) window = j + 3;
  const auto block = block_space(j);
  const auto labels = energy_labels(block.space);
  std::array<MatrixXcd, 3> ib;
  for (int l = 1; l <= 3; ++l) {
    ib[l - 1] = assemble_block(block, dipole, BasisVariant::wigner(), l).ib();
  }

  std::set<std::pair<std::int64_t, std::int64_t>> gaps;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      const auto g = gap(inertia, labels[a].j, labels[a].k, labels[b].j, labels[b].k).canonical();
      if (!g.is_zero()) gaps.insert({g.q1, g.q2});
    }
  }

  ExcitedModeSet out;
  out.j = j;
  out.window = window;
  const double scale = std::max({std::abs(dipole.d1), std::abs(dipole.d2), std::abs(dipole.d3)});
  for (const auto& [q1, q2] : gaps) {
    GapCoeff g{q1, q2, 0.0};
    g.value = std::abs(g.signed_value(inertia));
    const auto report = classify_resonances(inertia, j, g, window);
    if (!report.xi1) continue;
    for (int l = 1; l <= 3; ++l) {
      const MatrixXcd masked = extract_gap(g, ib[l - 1], labels, inertia);
      if (masked.cwiseAbs().maxCoeff() <= 1e-14 * scale) continue;
      for (const cd xi : {cd(1, 0), cd(0, 1)}) {
        ExcitedMode mode{g, l, xi, report.xi0, apply_W(xi, masked, labels, inertia)};
        if (mode.strong) out.modes0.push_back(mode);
        out.modes1.push_back(std::move(mode));
      }
    }
  }
  return out;
}

Eigen::VectorXd su_coordinates(const MatrixXcd& a) {
  const Index n = a.rows();
  Eigen::VectorXd v(n * n);
  Index p = 0;
  for (Index i = 0; i < n; ++i) v(p++) = a(i, i).imag();
  for (Index i = 0; i < n; ++i) {
    for (Index k = i + 1; k < n; ++k) {
      v(p++) = std::numbers::sqrt2 * a(i, k).real();
      v(p++) = std::numbers::sqrt2 * a(i, k).imag();
    }
  }
  return v;
}

MatrixXcd from_su_coordinates(const Eigen::VectorXd& v, Index n) {
  if (v.size() != n * n) throw std::invalid_argument("from_su_coordinates: size mismatch");
  MatrixXcd a = MatrixXcd::Zero(n, n);
  Index p = 0;
  for (Index i = 0; i < n; ++i) a(i, i) = cd(0.0, v(p++));
  for (Index i = 0; i < n; ++i) {
    for (Index k = i + 1; k < n; ++k) {
      const cd z(v(p) / std::numbers::sqrt2, v(p + 1) / std::numbers::sqrt2);
      p += 2;
      a(i, k) = z;
      a(k, i) = -std::conj(z);
    }
  }
  return a;
}

LieSpan::LieSpan(Index n, double tol) : n_(n), tol_(tol), coords_(0, n * n) {}

double LieSpan::residual(const MatrixXcd& m) const {
  if (m.rows() != n_ || m.cols() != n_) throw std::invalid_argument("residual: size mismatch");
  Eigen::VectorXd v = su_coordinates(m);
  const double norm = v.norm();
  if (norm == 0.0) return 0.0;
  v /= norm;
  for (int pass = 0; pass < 2; ++pass) v -= coords_.transpose() * (coords_ * v);
  return v.norm();
}

Eigen::MatrixXd LieSpan::gram() const { return coords_ * coords_.transpose(); }

nlohmann::json LieSpan::summary() const {
  return {{"n", n_},
          {"dim", dim()},
          {"su_dim", n_ * n_ - 1},
          {"tol", tol_},
          {"brackets", brackets_},
          {"status", status_ == ClosureStatus::kComplete ? "complete" : "incomplete"}};
}

// Incremental orthonormal basis with block Gram-Schmidt against the span.
class SpanBuilder {
 public:
  SpanBuilder(LieSpan& span, std::size_t max_dim) : span_(span), max_dim_(max_dim) {
    const Index width = span_.n_ * span_.n_;
    store_.resize(static_cast<Index>(max_dim_), width);
    for (Index r = 0; r < span_.coords_.rows(); ++r) store_.row(r) = span_.coords_.row(r);
    count_ = span_.coords_.rows();
  }

  ~SpanBuilder() { span_.coords_ = store_.topRows(count_); }

  bool full() const { return static_cast<std::size_t>(count_) >= max_dim_; }

  // Appends the independent directions of the candidates; returns how many.
  std::size_t add(const std::vector<MatrixXcd>& candidates) {
    if (candidates.empty() || full()) return 0;
    const Index width = store_.cols();
    Eigen::MatrixXd c(static_cast<Index>(candidates.size()), width);
    std::vector<bool> live(candidates.size(), true);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      Eigen::VectorXd v = su_coordinates(candidates[i]);
      const double norm = v.norm();
      if (norm == 0.0) {
        live[i] = false;
        c.row(static_cast<Index>(i)).setZero();
      } else {
        c.row(static_cast<Index>(i)) = v.transpose() / norm;
      }
    }
    if (count_ > 0) {
      const auto q = store_.topRows(count_);
      for (int pass = 0; pass < 2; ++pass) c -= (c * q.transpose()) * q;
    }
    const Index first_new = count_;
    std::size_t added = 0;
    for (std::size_t i = 0; i < candidates.size() && !full(); ++i) {
      if (!live[i]) continue;
      Eigen::RowVectorXd r = c.row(static_cast<Index>(i));
      for (int pass = 0; pass < 2; ++pass) {
        for (Index k = first_new; k < count_; ++k) r -= r.dot(store_.row(k)) * store_.row(k);
      }
      const double norm = r.norm();
      if (norm <= span_.tol_) continue;
      store_.row(count_) = r / norm;
      span_.basis_.push_back(from_su_coordinates(store_.row(count_).transpose(), span_.n_));
      ++count_;
      ++added;
    }
    return added;
  }

  // Closure of `seed` under ad of `ad_generators`.
  static LieSpan ad_closure(const std::vector<MatrixXcd>& seed, const std::vector<MatrixXcd>& ad_generators,
                               Index n, const ClosureOptions& options) {
    LieSpan span(n, options.tol);
    const std::size_t su_dim = static_cast<std::size_t>(n * n - 1);
    const std::size_t cap = options.max_dim == 0 ? su_dim : std::min(options.max_dim, su_dim);
    {
      SpanBuilder builder(span, cap);
      builder.add(seed);
      std::size_t next = 0;
      while (next < span.basis_.size() && !builder.full()) {
        std::vector<MatrixXcd> batch;
        while (next < span.basis_.size() && batch.size() < options.batch) {
          for (const auto& g : ad_generators) batch.push_back(commutator(g, span.basis_[next]));
          ++next;
        }
        span.brackets_ += batch.size();
        builder.add(batch);
        if (options.max_brackets != 0 && span.brackets_ >= options.max_brackets &&
            next < span.basis_.size() && !builder.full()) {
          span.status_ = ClosureStatus::kIncomplete;
          break;
        }
      }
      if (builder.full() && cap < su_dim) span.status_ = ClosureStatus::kIncomplete;
    }
    return span;
  }

  static void set_generators(LieSpan& span, std::vector<MatrixXcd> gens) {
    span.generators_ = std::move(gens);
  }

 private:
  LieSpan& span_;
  std::size_t max_dim_;
  Eigen::MatrixXd store_;
  Index count_ = 0;
};

namespace {

void check_generators(const std::vector<MatrixXcd>& gens, Index n) {
  for (const auto& g : gens) {
    if (g.rows() != n || g.cols() != n) throw std::invalid_argument("generators differ in size");
    const double scale = std::max(1.0, g.norm());
    if ((g + g.adjoint()).norm() > 1e-10 * scale) {
      throw std::invalid_argument("generator is not skew-Hermitian");
    }
    if (std::abs(g.trace()) > 1e-10 * scale) throw std::invalid_argument("generator is not traceless");
  }
}

}  // namespace

LieSpan lie_closure(const std::vector<MatrixXcd>& generators, const ClosureOptions& options) {
  if (generators.empty()) return LieSpan(0, options.tol);
  const Index n = generators.front().rows();
  check_generators(generators, n);
  LieSpan span = SpanBuilder::ad_closure(generators, generators, n, options);
  SpanBuilder::set_generators(span, generators);
  return span;
}

LieSpan ideal_closure(const std::vector<MatrixXcd>& nu0, const std::vector<MatrixXcd>& ad_generators,
                      const ClosureOptions& options) {
  if (nu0.empty()) {
    const Index n = ad_generators.empty() ? 0 : ad_generators.front().rows();
    return LieSpan(n, options.tol);
  }
  const Index n = nu0.front().rows();
  check_generators(nu0, n);
  check_generators(ad_generators, n);
  return SpanBuilder::ad_closure(nu0, ad_generators, n, options);
}

LieSpan minimal_ideal(const std::vector<MatrixXcd>& nu0, const LieSpan& ambient,
                      const ClosureOptions& options) {
  for (const auto& m : nu0) {
    if (ambient.residual(m) > ambient.tol()) {
      throw std::logic_error("minimal_ideal: a generator of the ideal lies outside the ambient algebra");
    }
  }
  const auto& ad = ambient.generators().empty() ? ambient.basis() : ambient.generators();
  if (nu0.empty()) return LieSpan(ambient.n(), options.tol);
  return ideal_closure(nu0, ad, options);
}

std::string to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::kMTracker: return "MTracker";
    case VerdictKind::kSymmetryBlocked: return "SymmetryBlocked";
    case VerdictKind::kInconclusive: return "Inconclusive";
  }
  return "?";
}

std::string Verdict::label() const {
  return detail.empty() ? to_string(kind) : to_string(kind) + ": " + detail;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : v.blocks) {
    blocks.push_back({{"j", b.j},
                      {"n", b.n},
                      {"su_dim", b.su_dim},
                      {"reached_dim", b.reached_dim},
                      {"status", b.status},
                      {"nu0", b.nu0},
                      {"nu1", b.nu1}});
  }
  return {{"verdict", v.label()},
          {"j_max", v.j_max},
          {"blocks", blocks},
          {"graph_connected", v.graph_connected}};
}

bool block_graph_connected(int j_max) {
  const int blocks = j_max;  // j = 0 .. j_max - 1
  if (blocks <= 0) return false;
  std::vector<int> parent(static_cast<std::size_t>(blocks));
  for (int i = 0; i < blocks; ++i) parent[static_cast<std::size_t>(i)] = i;
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int a = 0; a < blocks; ++a) {
    for (int b = a + 1; b < blocks; ++b) {
      // I_a = {a, a+1}, I_b = {b, b+1}
      const bool meet = b <= a + 1;
      if (meet) parent[static_cast<std::size_t>(find(b))] = find(a);
    }
  }
  for (int i = 0; i < blocks; ++i) {
    if (find(i) != find(0)) return false;
  }
  return true;
}

Verdict lgtc_verdict(int j_max, const Dipole& dipole, const Inertia& inertia,
                     const LgtcOptions& options) {
  if (j_max < 1) throw std::invalid_argument("lgtc_verdict: J_max must be >= 1");
  Verdict v;
  v.j_max = j_max;
  v.graph_connected = block_graph_connected(j_max);

  if (options.run_detectors) {
    const int probe = std::min(j_max - 1, 2);
    if (dipole.classify() == DipoleClass::kGenuine) {
      const auto rep = detect_genuine_symmetry(dipole, inertia, probe, options.seed);
      if (rep.conserved) {
        v.kind = VerdictKind::kSymmetryBlocked;
        v.detail = "k-invariance";
        return v;
      }
    }
    if (dipole.classify() == DipoleClass::kOrthogonal) {
      const auto rep = detect_parity_symmetry(dipole, inertia, probe);
      if (rep.status == "conserved") {
        v.kind = VerdictKind::kSymmetryBlocked;
        v.detail = "parity";
        return v;
      }
    }
  }
  if (!inertia.resonance_exact) {
    v.detail = "rational I2/I3: exact resonance classification unavailable";
    return v;
  }

  const int ceiling = options.allow_large_blocks ? j_max - 1 : std::min(j_max - 1, options.max_block);
  v.blocks.resize(static_cast<std::size_t>(j_max));
  parallel_for(static_cast<std::size_t>(j_max), options.threads, [&](std::size_t i) {
    const int j = static_cast<int>(i);
    auto& b = v.blocks[i];
    b.j = j;
    b.n = static_cast<Index>(block_space(j).dim());
    b.su_dim = static_cast<std::size_t>(b.n * b.n - 1);
    if (j > ceiling) {
      b.status = "skipped";
      return;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto modes = excited_modes(j, dipole, inertia);
    b.nu0 = modes.modes0.size();
    b.nu1 = modes.modes1.size();
    const auto ideal = ideal_closure(modes.matrices0(), modes.matrices1(), options.closure);
    b.reached_dim = ideal.dim();
    if (ideal.status() == ClosureStatus::kIncomplete) {
      b.status = "incomplete";
    } else {
      b.status = b.reached_dim == b.su_dim ? "su" : "proper";
    }
    b.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  bool all_su = v.graph_connected;
  bool skipped = false;
  for (const auto& b : v.blocks) {
    all_su = all_su && b.status == "su";
    skipped = skipped || b.status == "skipped";
  }
  if (all_su) {
    v.kind = VerdictKind::kMTracker;
  } else if (skipped) {
    v.detail = "blocks above j=" + std::to_string(ceiling) + " not computed";
  } else {
    v.detail = "some block ideal is not su(n)";
  }
  return v;
}

}  // namespace symtop
