#include "symtop/spectrum.h"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace symtop {

Inertia::Inertia(double i2_, double i3_, bool exact) : i2(i2_), i3(i3_), resonance_exact(exact) {
  if (!(i2 > 0.0) || !(i3 > 0.0)) throw std::invalid_argument("Inertia: I2 and I3 must be positive");
}

double energy(const Inertia& inertia, int j, int k) {
  if (j < 0 || std::abs(k) > j) {
    throw std::out_of_range("energy: |k|=" + std::to_string(std::abs(k)) + " exceeds j=" +
                            std::to_string(j));
  }
  return j * (j + 1) / (2.0 * inertia.i2) + inertia.anisotropy() * k * k;
}

GapCoeff GapCoeff::canonical() const {
  if (q1 < 0 || (q1 == 0 && q2 < 0)) return {-q1, -q2, value};
  return *this;
}

double GapCoeff::signed_value(const Inertia& inertia) const {
  return static_cast<double>(q1) / inertia.i2 + static_cast<double>(q2) * inertia.anisotropy();
}

GapCoeff gap(const Inertia& inertia, int j, int k, int j2, int k2) {
  if (std::abs(k) > j || std::abs(k2) > j2) throw std::out_of_range("gap: |k| exceeds j");
  GapCoeff g;
  g.q1 = (static_cast<std::int64_t>(j2) * (j2 + 1) - static_cast<std::int64_t>(j) * (j + 1)) / 2;
  g.q2 = static_cast<std::int64_t>(k2) * k2 - static_cast<std::int64_t>(k) * k;
  g.value = std::abs(g.signed_value(inertia));
  return g;
}

GapCoeff gap(const Inertia& inertia, const BasisIndex& from, const BasisIndex& to) {
  return gap(inertia, from.j, from.k, to.j, to.k);
}

GapCoeff lambda_gap(const Inertia& inertia, int j, int k) { return gap(inertia, j, k, j + 1, k + 1); }

GapCoeff eta_gap(const Inertia& inertia, int k) {
  const int j = std::max(std::abs(k), std::abs(k + 1));
  return gap(inertia, j, k, j, k + 1);
}

GapCoeff sigma_gap(const Inertia& inertia, int j) { return gap(inertia, j, 0, j + 1, 0); }

std::string describe(const GapCoeff& g) {
  return "(" + std::to_string(g.q1) + "," + std::to_string(g.q2) + ")";
}

std::vector<std::pair<BasisIndex, BasisIndex>> selection_rule_pairs(int j_max) {
  const auto all = StateSpace::levels(0, j_max);
  std::vector<std::pair<BasisIndex, BasisIndex>> out;
  for (const auto& a : all) {
    for (int dl = 0; dl <= 1; ++dl) {
      for (int dk = -1; dk <= 1; ++dk) {
        for (int dm = -1; dm <= 1; ++dm) {
          const BasisIndex b{a.j + dl, a.k + dk, a.m + dm};
          if (b == a || !all.contains(b)) continue;
          if (dl == 0 && b < a) continue;
          out.emplace_back(a, b);
        }
      }
    }
  }
  return out;
}

std::size_t ResonanceReport::count(TransitionRegion region) const {
  std::size_t n = 0;
  for (const auto& t : transitions) n += t.region == region;
  return n;
}

ResonanceReport classify_resonances(const Inertia& inertia, int j, const GapCoeff& sigma,
                                    int j_max) {
  if (!inertia.resonance_exact) {
    throw std::domain_error("exact classification requires irrational-ratio mode");
  }
  if (j < 0 || j_max < j + 2) throw std::invalid_argument("classify_resonances: need J_max >= j+2");
  ResonanceReport report;
  report.j = j;
  report.j_max = j_max;
  report.gap = sigma.canonical();
  report.xi0 = true;
  report.xi1 = true;
  auto in_block = [j](const BasisIndex& b) { return b.j == j || b.j == j + 1; };
  for (const auto& [a, b] : selection_rule_pairs(j_max)) {
    const auto g = gap(inertia, a, b);
    if (g.is_zero() || !g.equals(sigma)) continue;
    const bool ia = in_block(a);
    const bool ib = in_block(b);
    Transition t{a, b, TransitionRegion::kInside};
    if (ia && ib) {
      t.region = TransitionRegion::kInside;
    } else if (ia != ib) {
      t.region = TransitionRegion::kBoundary;
      report.xi0 = false;
      report.xi1 = false;
    } else {
      t.region = TransitionRegion::kOutside;
      report.xi0 = false;
    }
    report.transitions.push_back(t);
  }
  return report;
}

nlohmann::json to_json(const GapCoeff& g) {
  return {{"q1", g.q1}, {"q2", g.q2}, {"value", g.value}};
}

namespace {

const char* region_name(TransitionRegion r) {
  switch (r) {
    case TransitionRegion::kInside: return "inside";
    case TransitionRegion::kBoundary: return "boundary";
    case TransitionRegion::kOutside: return "outside";
  }
  return "?";
}

nlohmann::json index_json(const BasisIndex& b) { return nlohmann::json::array({b.j, b.k, b.m}); }

}  // namespace

nlohmann::json to_json(const ResonanceReport& report) {
  nlohmann::json transitions = nlohmann::json::array();
  for (const auto& t : report.transitions) {
    transitions.push_back(
        {{"from", index_json(t.from)}, {"to", index_json(t.to)}, {"region", region_name(t.region)}});
  }
  return {{"j", report.j},     {"j_max", report.j_max}, {"gap", to_json(report.gap)},
          {"xi0", report.xi0}, {"xi1", report.xi1},     {"transitions", transitions}};
}

namespace {

// Pairs (j1, s) -> (j2, s+h) inside the block with j <= j1 <= j2 <= j+1.
template <typename Fn>
void for_each_block_pair(int j, Fn&& fn) {
  for (int j1 = j; j1 <= j + 1; ++j1) {
    for (int j2 = j1; j2 <= j + 1; ++j2) {
      for (int s = -j1; s <= j1; ++s) {
        for (int h = -1; h <= 1; ++h) {
          if (std::abs(s + h) > j2) continue;
          fn(j1, j2, s, h);
        }
      }
    }
  }
}

}  // namespace

LemmaCheck verify_lemma_important(const Inertia& inertia, int j_max) {
  if (!inertia.resonance_exact) {
    throw std::domain_error("exact classification requires irrational-ratio mode");
  }
  LemmaCheck out;
  auto record = [&out](int part, int j, int k, int j1, int j2, int s, int h) {
    out.holds = false;
    out.counterexamples.push_back({part, j, k, j1, j2, s, h});
  };
  for (int j = 0; j <= j_max - 2; ++j) {
    for (int k = -j; k <= j; ++k) {
      const auto lam = lambda_gap(inertia, j, k);
      const auto sig = gap(inertia, j, k, j + 1, k);
      for_each_block_pair(j, [&](int j1, int j2, int s, int h) {
        const auto g = gap(inertia, j1, s, j2, s + h);
        ++out.equations_checked;
        if (g.equals(lam)) {
          const bool ok = j1 == j && j2 == j + 1 && std::abs(s) == std::abs(k) &&
                          std::abs(s + h) == std::abs(k + 1);
          if (!ok) record(1, j, k, j1, j2, s, h);
        }
        ++out.equations_checked;
        if (g.equals(sig)) {
          const bool ok = j1 == j && j2 == j + 1 && h == 0;
          if (!ok) record(3, j, k, j1, j2, s, h);
        }
      });
    }
    for (int k = -j; k <= j - 1; ++k) {
      const auto eta = gap(inertia, j, k, j, k + 1);
      for_each_block_pair(j, [&](int j1, int j2, int s, int h) {
        const auto g = gap(inertia, j1, s, j2, s + h);
        ++out.equations_checked;
        if (!g.equals(eta)) return;
        const int a = std::abs(s);
        const int b = std::abs(s + h);
        const int ka = std::abs(k);
        const int kb = std::abs(k + 1);
        const bool ok = j1 == j2 && ((a == ka && b == kb) || (a == kb && b == ka));
        if (!ok) record(2, j, k, j1, j2, s, h);
      });
    }
  }
  return out;
}

std::vector<BlockGapFamily> block_gap_families(const Inertia& inertia, int j) {
  std::vector<BlockGapFamily> out;
  for (int k = -j; k <= j; ++k) {
    out.push_back({"lambda_" + std::to_string(k) + "^" + std::to_string(j),
                   lambda_gap(inertia, j, k), true, true});
  }
  out.push_back({"sigma^" + std::to_string(j), sigma_gap(inertia, j), true, true});
  for (int k = -j; k <= j; ++k) {
    out.push_back({"eta_" + std::to_string(k), eta_gap(inertia, k), false, true});
  }
  return out;
}

}  // namespace symtop
