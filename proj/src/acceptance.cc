#include "symtop/acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>

#include "symtop/classical.h"
#include "symtop/lie.h"
#include "symtop/quantum_dynamics.h"
#include "symtop/report_io.h"

namespace symtop {

namespace {

using Eigen::Index;

Inertia reference_inertia() { return Inertia(1.0, 1.0 / std::sqrt(2.0), true); }
Dipole reference_dipole() { return Dipole(0.0, 0.2, 0.3); }
Dipole genuine_dipole() { return Dipole(0.0, 0.0, 1.0); }
Dipole orthogonal_dipole() { return Dipole(0.3, 0.4, 0.0); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Context {
  AcceptanceOptions options;
  double max_defect = 0.0;
  std::size_t propagators = 0;

  void record_unitarity(double defect) {
    max_defect = std::max(max_defect, defect);
    ++propagators;
  }
};

CriterionResult block_closure(int id, int j, std::size_t target, double budget) {
  CriterionResult r;
  r.id = id;
  r.title = "block closure j=" + std::to_string(j);
  LgtcOptions opt;
  const auto modes = excited_modes(j, reference_dipole(), reference_inertia());
  const auto start = std::chrono::steady_clock::now();
  const auto ideal = ideal_closure(modes.matrices0(), modes.matrices1(), opt.closure);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = ideal.dim() == target && ideal.status() == ClosureStatus::kComplete && secs <= budget;
  r.status = ok ? "pass" : "fail";
  r.detail = "dim T = " + std::to_string(ideal.dim()) + " (target " + std::to_string(target) + "), |nu0| = " +
             std::to_string(modes.modes0.size()) + ", |nu1| = " + std::to_string(modes.modes1.size()) +
             ", closure " + sci(secs) + " s of " + sci(budget) + " s";
  r.data = {{"dim", ideal.dim()},      {"target", target},  {"nu0", modes.modes0.size()},
            {"nu1", modes.modes1.size()}, {"closure_seconds", secs}, {"budget_seconds", budget}};
  return r;
}

CriterionResult genuine_symmetry(Context& ctx) {
  CriterionResult r;
  r.id = 3;
  r.title = "genuine-top k-invariance";
  const auto dip = genuine_dipole();
  const auto in = reference_inertia();
  const auto rep = detect_genuine_symmetry(dip, in, 2, ctx.options.seed);

  const auto space = StateSpace::levels(0, 3);
  const auto sys = SystemMatrices::build(space, dip, in);
  std::mt19937_64 rng(ctx.options.seed);
  std::uniform_int_distribution<int> pick_k(-3, 3);
  std::normal_distribution<double> g;
  double leak = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = pick_k(rng);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(sys.dim());
    for (Index i = 0; i < sys.dim(); ++i) {
      if (space[static_cast<std::size_t>(i)].k == k) psi(i) = {g(rng), g(rng)};
    }
    psi.normalize();
    const auto pulse = ControlPulse::random(rng, 8, 1.0, 1.0);
    const auto u = propagator(sys, pulse);
    ctx.record_unitarity(unitarity_defect(u));
    const Eigen::VectorXcd out = u * psi;
    double outside = 0.0;
    for (Index i = 0; i < sys.dim(); ++i) {
      if (space[static_cast<std::size_t>(i)].k != k) outside += std::norm(out(i));
    }
    leak = std::max(leak, outside);
  }
  const bool ok = rep.max_commutator < 1e-12 && leak < 1e-9;
  r.status = ok ? "pass" : "fail";
  r.detail = "max |[P3,B_l]|_F = " + sci(rep.max_commutator) + " on j <= 2, max leakage " + sci(leak) +
             " over 100 pulses";
  r.data = {{"max_commutator", rep.max_commutator}, {"max_leakage", leak}, {"pulses", 100}};
  return r;
}

CriterionResult parity_symmetry() {
  CriterionResult r;
  r.id = 4;
  r.title = "orthogonal-top parity";
  const auto rep = detect_parity_symmetry(orthogonal_dipole(), reference_inertia(), 2);
  const bool ok = rep.status == "conserved" && rep.max_cross < 1e-12;
  r.status = ok ? "pass" : "fail";
  r.detail = "max cross-parity entry " + sci(rep.max_cross) + " on j <= 2 (" + rep.status + ")";
  r.data = {{"max_cross", rep.max_cross}, {"theta", rep.theta}, {"status", rep.status}};
  return r;
}

CriterionResult restricted() {
  CriterionResult r;
  r.id = 5;
  r.title = "restricted S_0 closure";
  const auto res = restricted_Sk_check(0, 2, genuine_dipole(), reference_inertia());
  const bool ok = res.blocks.size() == 2 && res.blocks[0].reached_dim == 15 && res.blocks[1].reached_dim == 63;
  r.status = ok ? "pass" : "fail";
  r.detail = "dims";
  for (const auto& b : res.blocks) r.detail += " " + std::to_string(b.reached_dim);
  r.detail += " (targets 15 63)";
  r.data = to_json(res);
  return r;
}

CriterionResult resonance_lemmas() {
  CriterionResult r;
  r.id = 6;
  r.title = "resonance lemmas";
  const auto in = reference_inertia();
  const auto lemma = verify_lemma_important(in, 4);
  std::size_t checked = 0;
  std::size_t bad = 0;
  for (int j = 0; j <= 2; ++j) {
    for (const auto& fam : block_gap_families(in, j)) {
      const auto rep = classify_resonances(in, j, fam.gap, j + 3);
      ++checked;
      if ((fam.expect_xi0 && !rep.xi0) || (fam.expect_xi1 && !rep.xi1)) ++bad;
    }
  }
  const bool ok = lemma.holds && lemma.counterexamples.empty() && bad == 0;
  r.status = ok ? "pass" : "fail";
  r.detail = std::to_string(lemma.equations_checked) + " lemma equations, " +
             std::to_string(lemma.counterexamples.size()) + " counterexamples; " + std::to_string(checked - bad) +
             "/" + std::to_string(checked) + " gap memberships hold";
  r.data = {{"equations_checked", lemma.equations_checked},
            {"counterexamples", lemma.counterexamples.size()},
            {"memberships_checked", checked},
            {"memberships_failed", bad}};
  return r;
}

CriterionResult oracle_equivalence() {
  CriterionResult r;
  r.id = 7;
  r.title = "coupling oracle equivalence";
  const QuadratureOracle oracle;
  double worst = 0.0;
  for (const auto& dip : {genuine_dipole(), orthogonal_dipole(), reference_dipole()}) {
    for (int j = 0; j <= 2; ++j) {
      const auto block = block_space(j);
      for (int l = 1; l <= 3; ++l) {
        const auto a = assemble_block(block, dip, BasisVariant::wigner(), l).ib();
        const auto o = oracle.ib_matrix(block.space, dip, l);
        worst = std::max(worst, (a - o).cwiseAbs().maxCoeff());
      }
    }
  }
  r.status = worst < 1e-8 ? "pass" : "fail";
  r.detail = "max |assembled - quadrature| = " + sci(worst) + " over j <= 2, 3 fields, 3 dipoles";
  r.data = {{"max_difference", worst}};
  return r;
}

CriterionResult classical_ranks(const Context& ctx) {
  CriterionResult r;
  r.id = 8;
  r.title = "classical rank certificates";
  RankSurveyOptions acc_opt;
  acc_opt.s_threshold = 1e-6;
  acc_opt.seed = ctx.options.seed;
  acc_opt.threads = ctx.options.threads;
  const auto acc = rank_survey({Inertia(2.0, 1.0), Dipole(0.3, 0.4, 0.1)}, acc_opt);
  RankSurveyOptions gen_opt;
  gen_opt.seed = ctx.options.seed;
  gen_opt.threads = ctx.options.threads;
  const auto gen = rank_survey({Inertia(2.0, 1.0), genuine_dipole()}, gen_opt);
  const bool acc_ok = acc.samples == 1000 && acc.at_rank(6) >= 999;
  const bool gen_ok = gen.samples == 1000 && gen.at_most(5) == 1000 &&
                      gen.rank5_p3_nonzero * 100 >= gen.p3_nonzero * 99 && gen.p3_nonzero > 0;
  r.status = acc_ok && gen_ok ? "pass" : "fail";
  r.detail = "accidental: rank 6 at " + std::to_string(acc.at_rank(6)) + "/" + std::to_string(acc.samples) +
             " states with |S| > 1e-6; genuine: rank <= 5 at " + std::to_string(gen.at_most(5)) + "/" +
             std::to_string(gen.samples) + ", rank 5 at " + std::to_string(gen.rank5_p3_nonzero) + "/" +
             std::to_string(gen.p3_nonzero) + " with P3 != 0";
  r.data = {{"accidental", to_json(acc)}, {"genuine", to_json(gen)}};
  return r;
}

CriterionResult classical_conservation(const Context& ctx) {
  CriterionResult r;
  r.id = 9;
  r.title = "classical conservation";
  std::mt19937_64 rng(ctx.options.seed);
  const BodyParams genuine{Inertia(2.0, 1.0), genuine_dipole()};
  const auto s0 = ClassicalState::random(rng);
  auto pulse = ControlPulse::random(rng, 10, 1.0, 1.0);
  const double scale = 10.0 / pulse.total_time();
  for (auto& s : pulse.segments) s.duration *= scale;
  const auto traj = integrate(s0, pulse, genuine, 1e-3);
  double p3 = 0.0;
  for (const auto& s : traj) p3 = std::max(p3, std::abs(s.state.p[2] - s0.p[2]));

  const BodyParams free_top{Inertia(2.0, 1.0), Dipole(0.3, 0.4, 0.1)};
  ControlPulse idle;
  idle.segments.push_back({10.0, {0.0, 0.0, 0.0}});
  const auto free_traj = integrate(s0, idle, free_top, 1e-3);
  const auto& end = free_traj.back().state;
  const double dnorm = std::abs(momentum_norm2(end) - momentum_norm2(s0));
  const double denergy = std::abs(kinetic_energy(end, free_top.inertia) - kinetic_energy(s0, free_top.inertia));
  const bool ok = p3 < 1e-9 && dnorm < 1e-9 && denergy < 1e-9;
  r.status = ok ? "pass" : "fail";
  r.detail = "max |P3(t) - P3(0)| = " + sci(p3) + "; free top |d|P|^2| = " + sci(dnorm) + ", |dE| = " + sci(denergy);
  r.data = {{"p3_drift", p3}, {"norm2_drift", dnorm}, {"energy_drift", denergy}, {"steps", traj.size() - 1}};
  return r;
}

CriterionResult three_wave(Context& ctx) {
  CriterionResult r;
  r.id = 11;
  r.title = "three-wave mixing";
  const auto in = reference_inertia();
  const auto gen = three_wave_mixing_demo(1, 1, 1, reference_dipole(), in);
  const auto gnu = three_wave_mixing_demo(1, 1, 1, genuine_dipole(), in);
  ctx.record_unitarity(gen.unitarity_defect);
  ctx.record_unitarity(gnu.unitarity_defect);
  const bool ok = gen.branch_asymmetry > 0.1 && gnu.branch_asymmetry < 1e-6;
  r.status = ok ? "pass" : "fail";
  r.detail = "|p_k - p_-k| generic " + sci(gen.branch_asymmetry) + " (target > 0.1), genuine " +
             sci(gnu.branch_asymmetry) + " (target < 1e-6); artifact targets";
  r.data = {{"generic", to_json(gen)}, {"genuine", to_json(gnu)}, {"targets_are_artifact_thresholds", true}};
  return r;
}

CriterionResult unitarity(Context& ctx) {
  CriterionResult r;
  r.id = 10;
  r.title = "propagator unitarity";
  std::mt19937_64 rng(ctx.options.seed + 1);
  for (const auto& dip : {reference_dipole(), orthogonal_dipole(), Dipole(0.3, 0.4, 0.1)}) {
    const auto sys = SystemMatrices::build(StateSpace::levels(0, 3), dip, reference_inertia());
    ctx.record_unitarity(unitarity_defect(propagator(sys, ControlPulse::random(rng, 20, 1.0, 2.0))));
  }
  r.status = ctx.max_defect < 1e-9 ? "pass" : "fail";
  r.detail = "max |U*U - I|_F = " + sci(ctx.max_defect) + " over " + std::to_string(ctx.propagators) +
             " composed propagators";
  r.data = {{"max_defect", ctx.max_defect}, {"propagators", ctx.propagators}};
  return r;
}

}  // namespace

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "fast") return Suite::kFast;
  if (name == "full") return Suite::kFull;
  return std::nullopt;
}

std::string to_string(Suite suite) { return suite == Suite::kFast ? "fast" : "full"; }

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  Context ctx;
  ctx.options = options;
  std::vector<CriterionResult> out;
  const auto timed = [&](int id, const std::string& title, const std::function<CriterionResult()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.id = id;
      r.title = title;
      r.status = "fail";
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.progress) *options.progress << format_line(r) << std::endl;
    out.push_back(std::move(r));
  };

  timed(1, "block closure j=0", [&] { return block_closure(1, 0, 99, 60.0); });
  if (options.suite == Suite::kFull) {
    timed(2, "block closure j=1", [&] { return block_closure(2, 1, 1155, 1800.0); });
  } else {
    CriterionResult r;
    r.id = 2;
    r.title = "block closure j=1";
    r.status = "skipped";
    r.detail = "full suite only";
    if (options.progress) *options.progress << format_line(r) << std::endl;
    out.push_back(r);
  }
  timed(3, "genuine-top k-invariance", [&] { return genuine_symmetry(ctx); });
  timed(4, "orthogonal-top parity", [&] { return parity_symmetry(); });
  timed(5, "restricted S_0 closure", [&] { return restricted(); });
  timed(6, "resonance lemmas", [&] { return resonance_lemmas(); });
  timed(7, "coupling oracle equivalence", [&] { return oracle_equivalence(); });
  timed(8, "classical rank certificates", [&] { return classical_ranks(ctx); });
  timed(9, "classical conservation", [&] { return classical_conservation(ctx); });
  // 11 runs before 10 so its propagators are included in the unitarity check.
  timed(11, "three-wave mixing", [&] { return three_wave(ctx); });
  timed(10, "propagator unitarity", [&] { return unitarity(ctx); });
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::string tag = r.status == "pass" ? "PASS" : (r.status == "fail" ? "FAIL" : "SKIP");
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
  return "[" + tag + "] " + std::to_string(r.id) + " " + r.title + ": " + r.detail + " (" + secs + " s)";
}

nlohmann::json to_json(const std::vector<CriterionResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"id", r.id},
                   {"title", r.title},
                   {"status", r.status},
                   {"detail", r.detail},
                   {"seconds", r.seconds},
                   {"data", r.data}});
  }
  return arr;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (r.status == "fail") return false;
  }
  return true;
}

}  // namespace symtop
