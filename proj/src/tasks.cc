#include "symtop/tasks.h"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "symtop/classical.h"
#include "symtop/lie.h"
#include "symtop/quantum_dynamics.h"
#include "symtop/report_io.h"

namespace symtop {

namespace {

using Eigen::Index;

nlohmann::json dipole_json(const Dipole& d) {
  return {{"d1", d.d1}, {"d2", d.d2}, {"d3", d.d3}, {"class", to_string(d.classify())}};
}

ControlPulse horizon_pulse(std::mt19937_64& rng, const TaskParams& p) {
  auto pulse = ControlPulse::random(rng, p.segments, p.u_max, 1.0);
  const double scale = p.horizon / pulse.total_time();
  for (auto& s : pulse.segments) s.duration *= scale;
  return pulse;
}

nlohmann::json verify_quantum(const ExperimentConfig& cfg, unsigned threads) {
  LgtcOptions opt;
  opt.closure.tol = cfg.tolerances.closure;
  opt.max_block = cfg.params.max_block;
  opt.allow_large_blocks = cfg.params.allow_large_blocks;
  opt.threads = threads;
  opt.seed = static_cast<unsigned>(cfg.seed);
  const auto verdict = lgtc_verdict(cfg.j_max, cfg.dipole, cfg.inertia, opt);
  nlohmann::json body = to_json(verdict);
  body["dipole"] = dipole_json(cfg.dipole);
  const int probe = std::min(cfg.j_max - 1, 2);
  const auto cls = cfg.dipole.classify();
  if (cls == DipoleClass::kGenuine) {
    const auto g = detect_genuine_symmetry(cfg.dipole, cfg.inertia, probe, cfg.seed);
    body["genuine_symmetry"] = {{"conserved", g.conserved},
                                {"max_commutator", g.max_commutator},
                                {"p3_drift", g.p3_drift},
                                {"p3_drift_zero_control", g.p3_drift_zero_control},
                                {"unitarity_defect", g.unitarity_defect}};
  }
  if (cls == DipoleClass::kOrthogonal) {
    const auto p = detect_parity_symmetry(cfg.dipole, cfg.inertia, probe);
    body["parity_symmetry"] = {{"status", p.status}, {"theta", p.theta}, {"max_cross", p.max_cross}};
  }
  return body;
}

nlohmann::json verify_classical(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                unsigned threads, std::vector<std::filesystem::path>& files) {
  const BodyParams params{cfg.inertia, cfg.dipole};
  const bool genuine = cfg.dipole.classify() == DipoleClass::kGenuine;
  RankSurveyOptions opt;
  opt.samples = static_cast<std::size_t>(cfg.params.samples);
  opt.depth = cfg.params.depth;
  opt.rel_tol = cfg.tolerances.rank;
  opt.seed = cfg.seed;
  opt.threads = threads;
  if (!genuine) opt.s_threshold = 1e-6;
  const auto survey = rank_survey(params, opt);

  nlohmann::json body;
  body["dipole"] = dipole_json(cfg.dipole);
  body["rank_survey"] = to_json(survey);
  const std::string n = std::to_string(survey.samples);
  if (genuine) {
    body["summary"] = "rank 5 at " + std::to_string(survey.at_rank(5)) + "/" + n +
                      " sampled states; rank <= 5 at " + std::to_string(survey.at_most(5)) + "/" + n;
    body["verdict"] = survey.at_most(5) == survey.samples ? "SymmetryBlocked: P3 level sets" : "Inconclusive";
  } else {
    body["summary"] = "rank 6 at " + std::to_string(survey.at_rank(6)) + "/" + n + " sampled generic states";
    body["verdict"] = survey.samples > 0 && survey.at_rank(6) == survey.samples
                          ? "bracket generating at every sampled state with S != 0"
                          : "Inconclusive";
  }

  std::mt19937_64 rng(cfg.seed);
  const auto s0 = ClassicalState::random(rng);
  const auto pulse = horizon_pulse(rng, cfg.params);
  const auto traj = integrate(s0, pulse, params, cfg.params.step);
  double p3 = 0.0;
  double qnorm = 0.0;
  for (const auto& s : traj) {
    p3 = std::max(p3, std::abs(s.state.p[2] - s0.p[2]));
    qnorm = std::max(qnorm, std::abs(s.state.quaternion_norm() - 1.0));
  }
  ControlPulse idle;
  idle.segments.push_back({cfg.params.horizon, {0.0, 0.0, 0.0}});
  const auto free_end = integrate(s0, idle, params, cfg.params.step).back().state;
  body["sample_state"] = {{"q", s0.q}, {"P", s0.p}};
  body["rank_at_sample_state"] = to_json(bracket_rank(s0, params, cfg.params.depth));
  body["singular_factors_at_sample_state"] = to_json(singular_factors(s0, params));
  body["conservation"] = {
      {"horizon", cfg.params.horizon},
      {"step", cfg.params.step},
      {"max_p3_drift", p3},
      {"max_quaternion_norm_defect", qnorm},
      {"free_top_norm2_drift", std::abs(momentum_norm2(free_end) - momentum_norm2(s0))},
      {"free_top_energy_drift",
       std::abs(kinetic_energy(free_end, cfg.inertia) - kinetic_energy(s0, cfg.inertia))}};
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  const auto path = out_dir / "trajectory.csv";
  write_text(path, csv.str());
  files.push_back(path);
  return body;
}

nlohmann::json simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                        std::vector<std::filesystem::path>& files) {
  const auto space = StateSpace::levels(0, cfg.j_max);
  const auto sys = SystemMatrices::build(space, cfg.dipole, cfg.inertia);
  std::mt19937_64 rng(cfg.seed);
  const auto pulse = horizon_pulse(rng, cfg.params);
  const auto p3 = p3_operator(space);
  auto state = QuantumState::basis_state(sys.dim(), 0);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(sys.dim(), sys.dim());

  std::ostringstream csv;
  csv << "t";
  for (int l = 0; l <= cfg.j_max; ++l) csv << ",level" << l;
  csv << ",P3\n";
  const auto level_pops = [&](const QuantumState& s) {
    std::vector<double> pops(static_cast<std::size_t>(cfg.j_max + 1), 0.0);
    for (Index i = 0; i < sys.dim(); ++i) pops[static_cast<std::size_t>(space[static_cast<std::size_t>(i)].j)] += std::norm(s.psi(i));
    return pops;
  };
  const auto row = [&](double t, const QuantumState& s) {
    csv << format_double(t);
    for (double p : level_pops(s)) csv << ',' << format_double(p);
    csv << ',' << format_double(s.psi.dot(p3 * s.psi).real()) << '\n';
  };
  double t = 0.0;
  row(t, state);
  for (const auto& seg : pulse.segments) {
    const auto step = segment_propagator(sys, seg.u, seg.duration);
    state.psi = step * state.psi;
    u = (step * u).eval();
    t += seg.duration;
    row(t, state);
  }
  const auto path = out_dir / "populations.csv";
  write_text(path, csv.str());
  files.push_back(path);

  const auto pops = level_pops(state);
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : pulse.segments) segs.push_back({{"duration", s.duration}, {"u", s.u}});
  const double defect = unitarity_defect(u);
  return {{"dipole", dipole_json(cfg.dipole)},
          {"levels", cfg.j_max},
          {"dimension", sys.dim()},
          {"pulse", segs},
          {"final_level_populations", pops},
          {"top_level_population", pops.back()},
          {"final_norm", state.norm()},
          {"unitarity_defect", defect},
          {"unitarity_ok", defect < cfg.tolerances.unitarity}};
}

nlohmann::json restricted_sk(const ExperimentConfig& cfg) {
  ClosureOptions opt;
  opt.tol = cfg.tolerances.closure;
  auto body = to_json(restricted_Sk_check(cfg.params.k, cfg.j_max, cfg.dipole, cfg.inertia, opt));
  body["dipole"] = dipole_json(cfg.dipole);
  return body;
}

nlohmann::json three_wave_task(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                               std::vector<std::filesystem::path>& files) {
  ThreeWaveOptions opt;
  opt.eps = cfg.params.eps;
  opt.phases = cfg.params.phases;
  opt.steps_per_period = cfg.params.steps_per_period;
  const auto res = three_wave_mixing_demo(cfg.params.j, cfg.params.k, cfg.params.m, cfg.dipole, cfg.inertia, opt);
  std::ostringstream csv;
  write_trace_csv(csv, res);
  const auto path = out_dir / "three_wave_trace.csv";
  write_text(path, csv.str());
  files.push_back(path);
  auto body = to_json(res);
  body["dipole"] = dipole_json(cfg.dipole);
  body["unitarity_ok"] = res.unitarity_defect < cfg.tolerances.unitarity;
  return body;
}

nlohmann::json resonance_report(const ExperimentConfig& cfg) {
  const int j = cfg.params.j;
  const int window = std::max(cfg.j_max, j + 2);
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& fam : block_gap_families(cfg.inertia, j)) {
    auto entry = to_json(classify_resonances(cfg.inertia, j, fam.gap, window));
    entry["family"] = fam.name;
    entry["expected_xi0"] = fam.expect_xi0;
    entry["expected_xi1"] = fam.expect_xi1;
    gaps.push_back(entry);
  }
  const auto lemma = verify_lemma_important(cfg.inertia, std::max(cfg.j_max, 2));
  nlohmann::json cex = nlohmann::json::array();
  for (const auto& c : lemma.counterexamples) {
    cex.push_back({{"part", c.part}, {"j", c.j}, {"k", c.k}, {"j1", c.j1}, {"j2", c.j2}, {"s", c.s}, {"h", c.h}});
  }
  return {{"j", j},
          {"window", window},
          {"gaps", gaps},
          {"lemma", {{"holds", lemma.holds}, {"equations_checked", lemma.equations_checked}, {"counterexamples", cex}}}};
}

}  // namespace

nlohmann::json report_header(const ExperimentConfig& cfg) {
  return {{"task", cfg.task},
          {"toolkit_version", kToolkitVersion},
          {"config_hash", cfg.hash()},
          {"seed", cfg.seed},
          {"tolerances",
           {{"rank", cfg.tolerances.rank},
            {"closure", cfg.tolerances.closure},
            {"unitarity", cfg.tolerances.unitarity}}},
          {"config", cfg.to_json()}};
}

TaskOutput run_task(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, unsigned threads) {
  TaskOutput out;
  nlohmann::json body;
  if (cfg.task == "verify-quantum") {
    body = verify_quantum(cfg, threads);
  } else if (cfg.task == "verify-classical") {
    body = verify_classical(cfg, out_dir, threads, out.files);
  } else if (cfg.task == "simulate") {
    body = simulate(cfg, out_dir, out.files);
  } else if (cfg.task == "restricted-sk") {
    body = restricted_sk(cfg);
  } else if (cfg.task == "three-wave") {
    body = three_wave_task(cfg, out_dir, out.files);
  } else if (cfg.task == "resonance-report") {
    body = resonance_report(cfg);
  } else {
    throw std::invalid_argument("unknown task '" + cfg.task + "'");
  }
  out.report = report_header(cfg);
  out.report["result"] = body;
  const auto path = out_dir / (cfg.task + ".json");
  write_text(path, dump_json(out.report));
  out.files.insert(out.files.begin(), path);
  return out;
}

}  // namespace symtop
