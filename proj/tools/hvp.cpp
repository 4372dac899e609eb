// hvp: command line driver for the wave-density solver and its diagnostics.
//
// Exit codes: 0 success, 1 usage/config/io error, 2 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "hvp/config.hpp"
#include "hvp/diagnostics.hpp"
#include "hvp/io.hpp"
#include "hvp/norms.hpp"
#include "hvp/oracle.hpp"
#include "hvp/parallel.hpp"
#include "hvp/snapshot.hpp"

using namespace hvp;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context {
  RunConfig cfg;
  Setup setup;
  std::string out;
};

Context load(const std::string& path, const std::string& out_override) {
  Context c;
  c.cfg = parse_config(path);
  c.setup = make_setup(c.cfg);
  c.out = out_override.empty() ? c.cfg.output.dir : out_override;
  fs::create_directories(c.out);
  return c;
}

double sup_real(const ComplexSpatialField& K) { return K.values.real().cwiseAbs().maxCoeff(); }

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void save_json(const std::string& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

WaveField initial_field(const Context& c, const std::string& snapshot) {
  if (snapshot.empty()) return sample(c.setup.grid, c.cfg.profile);
  WaveField a = wave_field(read_snapshot(snapshot));
  require_same(a.lattice, c.setup.grid.phase, "snapshot vs config grid");
  return a;
}

std::string snap_name(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06zu.snap", stem, i);
  return buf;
}

const std::vector<std::string> kRunHeader = {
    "t [time]",          "alpha_l2 [mass^1/2]",    "alpha_sup [mass^1/2/vol^1/2]", "a_norm [mass^1/2]",
    "rho_sup [mass/length^d]", "force_sup [length/time^2]", "re_k_max [1/time]", "k_max [1/time]",
    "H [energy]",        "H_vl [energy]",          "M2 [mass*speed^2]"};

std::string run_csv(const Trajectory& tr) {
  CsvWriter w(kRunHeader);
  for (const StepRow& r : tr.rows)
    w.row({r.t, r.l2, r.sup, r.a_norm, r.rho_sup, r.force_sup, r.re_k_max, r.k_max, r.H, r.H_vl, r.M2});
  return w.str();
}

// Kept fields as snapshots, indexed by step.
void dump_fields(const Context& c, const Trajectory& tr) {
  const int d = tr.grid.d;
  for (std::size_t j = 0; j < tr.fields.size(); ++j) {
    const auto step = static_cast<std::size_t>(std::llround(tr.times[j] / c.setup.solver.dt));
    write_snapshot(join(c.out, snap_name("alpha", step)), to_snapshot(tr.fields[j], d, tr.times[j]));
  }
}

json norm_json(const NormReport& r) {
  json j;
  j["a_norm"] = r.a_norm;
  if (!r.per_derivative.empty()) {
    j["b_norm"] = r.b_norm;
    j["per_derivative"] = r.per_derivative;
  }
  j["argmax_radius"] = r.argmax_radius;
  j["radius_set"] = r.radius_set;
  j["radius_profile"] = r.radius_profile;
  return j;
}

json energy_json(const EnergyReport& e) {
  return {{"kinetic", e.kinetic}, {"potential", e.potential}, {"H", e.H}, {"H_vl", e.H_vl}};
}

int cmd_init(const std::string& path, bool force) {
  if (fs::exists(path) && !force) throw Error(ErrorKind::IoError, path + " exists (use --force)");
  atomic_write(path, dump_config(RunConfig{}));
  return 0;
}

int cmd_run(const Context& c, int dump_every) {
  SolverConfig sc = c.setup.solver;
  const int every = dump_every >= 0 ? dump_every : c.cfg.output.dump_every;
  if (every > 0) sc.keep_every = every;
  const Convolver conv(c.setup.grid.x, c.setup.kernel, c.cfg.conv);
  const RunResult r = run(initial_field(c, ""), conv, sc);
  atomic_write(join(c.out, c.cfg.output.csv), run_csv(r.trajectory));
  if (every > 0) dump_fields(c, r.trajectory);
  write_snapshot(join(c.out, "alpha_final.snap"),
                 to_snapshot(r.trajectory.fields.back(), c.setup.grid.d, r.trajectory.times.back()));
  save_json(join(c.out, "run.json"), {{"ok", r.ok},
                                      {"accepted", r.accepted},
                                      {"message", r.message},
                                      {"l2_drift", r.trajectory.l2_drift},
                                      {"final_time", r.trajectory.times.back()},
                                      {"steps", r.trajectory.rows.empty() ? 0 : r.trajectory.rows.size() - 1}});
  if (!r.ok) {
    std::cerr << "hvp: " << r.message << "\n";
    return 2;
  }
  return 0;
}

int cmd_picard(const Context& c) {
  const Convolver conv(c.setup.grid.x, c.setup.kernel, c.cfg.conv);
  const PicardResult p = picard_solve(initial_field(c, ""), conv, c.setup.solver);
  CsvWriter w({"iteration [1]", "distance [mass^1/2]"});
  for (std::size_t n = 0; n < p.log.distance.size(); ++n) w.row({double(n + 1), p.log.distance[n]});
  w.save(join(c.out, "picard.csv"));
  const Trajectory& tr = p.trajectory;
  write_snapshot(join(c.out, "picard_final.snap"), to_snapshot(tr.fields.back(), tr.grid.d, tr.times.back()));
  save_json(join(c.out, "picard.json"),
            {{"iterations", p.log.iterations}, {"converged", p.log.converged}, {"distance", p.log.distance}});
  return 0;
}

int cmd_norms(const std::string& snapshot, double kappa, double p, double radius_max, std::uint64_t budget_mb,
              bool with_gradient, const std::string& out) {
  const Snapshot s = read_snapshot(snapshot);
  const auto radii = fit_radius_set(s.lattice, default_radius_set(s.lattice, radius_max), budget_mb << 20);
  NormReport r;
  if (s.kind == "complex") {
    const WaveField a = wave_field(s);
    r = with_gradient ? b_norm(a, gradient(a, Axes::All), kappa, radii, p) : a_norm(a, kappa, p, radii);
  } else {
    const RealField f = real_field(s);
    r = a_norm(f, kappa, p, radii);
  }
  json j = norm_json(r);
  j["kappa"] = kappa;
  j["p"] = p;
  j["time"] = s.time;
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json(out, j);
  return 0;
}

int cmd_tuple(const Context& c, const std::string& snapshot) {
  const WaveField a = initial_field(c, snapshot);
  const Convolver conv(c.setup.grid.x, c.setup.kernel, c.cfg.conv);
  const CharacteristicTuple t = characteristic_tuple(a, conv);
  write_snapshot(join(c.out, "rho.snap"), to_snapshot(t.rho));
  write_snapshot(join(c.out, "force.snap"), to_snapshot(t.force));
  write_snapshot(join(c.out, "phi.snap"), to_snapshot(t.phase_density));
  write_snapshot(join(c.out, "phase_force.snap"), to_snapshot(t.phase_force, 0));
  double self_force = 0.0;
  for (int k = 0; k < t.force.components(); ++k)
    self_force = std::max(self_force, std::abs(inner(t.rho, component(t.force, k))));
  save_json(join(c.out, "tuple.json"), {{"rho_mass", integral(t.rho)},
                                        {"rho_sup", sup_norm(t.rho)},
                                        {"force_sup", sup_norm(t.force)},
                                        {"phi_sup", sup_norm(t.phase_density)},
                                        {"k_sup", sup_norm(t.phase_force)},
                                        {"re_k_sup", sup_real(t.phase_force)},
                                        {"self_force", self_force}});
  return 0;
}

int cmd_diagnose(const Context& c, const std::string& snapshot) {
  const WaveField a = initial_field(c, snapshot);
  const Convolver conv(c.setup.grid.x, c.setup.kernel, c.cfg.conv);
  const CharacteristicTuple t = characteristic_tuple(a, conv);
  const int d = c.setup.grid.d;
  const double kappa = c.setup.solver.kappa;
  json j;
  j["l2"] = lp_norm(a, 2.0);
  j["sup"] = sup_norm(a);
  j["a_norm"] = norm_json(a_norm(a, kappa, 2.0, c.setup.solver.radius_set));
  j["energy"] = energy_json(energy(a, conv, t));
  json moments = json::array(), rho = json::array();
  for (double k : c.cfg.diagnostics.moment_k) {
    const MomentCheck m = moment_inequality_check(a, k, 0.0, 2.0);
    json row;
    row["k"] = k;
    row["M"] = velocity_moment(a, k).M;
    row["check_l0_p2"] = {{"lhs", m.lhs}, {"rhs", m.rhs}, {"r", m.r}, {"pass", m.pass}};
    moments.push_back(row);
  }
  for (double p : c.cfg.diagnostics.rho_p) rho.push_back({{"p", p}, {"norm", lp_norm(t.rho, p)}});
  j["moments"] = moments;
  j["rho_p"] = rho;
  const AdmissibleRanges r = admissible_ranges(d, kappa);
  j["admissible"] = {{"p_lo", r.p_lo}, {"p_hi", r.p_hi}, {"k_min", r.k_min}};
  j["force_sup"] = sup_norm(t.force);
  j["re_k_sup"] = sup_real(t.phase_force);
  save_json(join(c.out, "diagnose.json"), j);
  return 0;
}

int cmd_monitor(const Context& c, const std::vector<std::string>& snapshots) {
  const Convolver conv(c.setup.grid.x, c.setup.kernel, c.cfg.conv);
  Trajectory tr;
  if (snapshots.empty()) {
    SolverConfig sc = c.setup.solver;
    sc.diagnostics = false;
    if (sc.keep_every == 0) sc.keep_every = 1;
    RunResult r = run(initial_field(c, ""), conv, sc);
    if (!r.ok) {
      std::cerr << "hvp: " << r.message << "\n";
      return 2;
    }
    tr = std::move(r.trajectory);
  } else {
    tr.grid = c.setup.grid;
    for (const auto& s : snapshots) {
      const Snapshot snap = read_snapshot(s);
      tr.times.push_back(snap.time);
      tr.fields.push_back(wave_field(snap));
      require_same(tr.fields.back().lattice, c.setup.grid.phase, "snapshot vs config grid");
    }
  }
  const auto& dc = c.cfg.diagnostics;
  const GlobalityMonitor m = globality_monitor(tr, conv, dc.rho_p, dc.moment_k, c.setup.solver.kappa);
  std::vector<std::string> header{"t [time]", "force_sup [length/time^2]"};
  for (double p : dc.rho_p) header.push_back("rho_l" + format_double(p) + " [mass/length^d]");
  for (double k : dc.moment_k) header.push_back("M" + format_double(k) + " [mass*speed^k]");
  CsvWriter w(header);
  for (std::size_t i = 0; i < m.times.size(); ++i) {
    std::vector<double> row{m.times[i], m.force_sup[i]};
    for (const auto& s : m.rho_p) row.push_back(s[i]);
    for (const auto& s : m.moment) row.push_back(s[i]);
    w.row(row);
  }
  w.save(join(c.out, "monitor.csv"));
  save_json(join(c.out, "monitor.json"), {{"p_list", m.p_list},
                                          {"p_admissible", m.p_admissible},
                                          {"k_list", m.k_list},
                                          {"k_admissible", m.k_admissible},
                                          {"p_range", {m.ranges.p_lo, m.ranges.p_hi}},
                                          {"k_min", m.ranges.k_min},
                                          {"force_growth", m.force_growth},
                                          {"rho_growth", m.rho_growth},
                                          {"moment_growth", m.moment_growth}});
  return 0;
}

int cmd_compare(const Context& c, double threshold) {
  SolverConfig sc = c.setup.solver;
  sc.diagnostics = false;
  const int every = c.cfg.output.dump_every > 0 ? c.cfg.output.dump_every : 1;
  sc.keep_every = every;
  const Convolver conv(c.setup.grid.x, c.setup.kernel, c.cfg.conv);
  const WaveField a = initial_field(c, "");
  const RunResult r = run(a, conv, sc);
  if (!r.ok) {
    std::cerr << "hvp: " << r.message << "\n";
    return 2;
  }
  const DensityTrajectory f = run_vlasov(modulus_squared(a), conv, sc);
  const auto rows = compare(r.trajectory, f);
  CsvWriter w({"t [time]", "l1 [mass]", "l2 [mass/vol^1/2]", "linf [mass/vol]", "rel_l1 [1]", "rel_l2 [1]",
               "rel_linf [1]"});
  for (const GapRow& g : rows) w.row({g.t, g.l1, g.l2, g.linf, g.rel_l1, g.rel_l2, g.rel_linf});
  w.save(join(c.out, "compare.csv"));
  const double final_gap = rows.back().rel_l1;
  save_json(join(c.out, "compare.json"), {{"final_rel_l1", final_gap},
                                          {"threshold", threshold},
                                          {"below_threshold", final_gap <= threshold},
                                          {"vlasov_mass_drift", f.mass_drift},
                                          {"vlasov_clipped_mass", f.clipped_mass},
                                          {"alpha_l2_drift", r.trajectory.l2_drift}});
  std::cout << "final relative L1 gap " << final_gap << (final_gap <= threshold ? " <= " : " > ") << threshold
            << "\n";
  return 0;
}

int cmd_gauge(const Context& c, double gc) {
  SolverConfig sc = c.setup.solver;
  sc.diagnostics = false;
  if (sc.keep_every == 0) sc.keep_every = 1;
  const Convolver conv(c.setup.grid.x, c.setup.kernel, c.cfg.conv);
  const GaugeResult g = gauge_shift(initial_field(c, ""), conv, sc, gc);
  if (!g.plain.ok || !g.shifted.ok) {
    std::cerr << "hvp: " << (g.plain.ok ? g.shifted.message : g.plain.message) << "\n";
    return 2;
  }
  save_json(join(c.out, "gauge.json"), {{"c", gc},
                                        {"modulus_gap", g.modulus_gap},
                                        {"phase_constancy", g.phase_constancy},
                                        {"modulus_error", g.modulus_error},
                                        {"measured_rate", g.measured_rate}});
  return 0;
}

// Characteristics of the frozen initial force over [0, t_end].
int cmd_flow(const Context& c, const std::string& snapshot, int seeds) {
  const WaveField a = initial_field(c, snapshot);
  const Convolver conv(c.setup.grid.x, c.setup.kernel, c.cfg.conv);
  const CharacteristicTuple t = characteristic_tuple(a, conv);
  const double T = c.setup.solver.t_end;
  const int sub = c.setup.solver.substeps * c.setup.solver.steps();
  const ForceSampler frozen({0.0, T}, {t.force, t.force});
  const Lattice& L = c.setup.grid.phase;
  const int d = c.setup.grid.d;
  std::vector<std::size_t> pick;
  const std::size_t stride = std::max<std::size_t>(1, L.size() / static_cast<std::size_t>(std::max(1, seeds)));
  for (std::size_t i = 0; i < L.size() && pick.size() < static_cast<std::size_t>(seeds); i += stride) pick.push_back(i);
  double round_trip = 0.0, det_dev = 0.0, reach = 0.0;
  int idx[kMaxDim];
  for (std::size_t i : pick) {
    L.unravel(i, idx);
    double x[6], v[6];
    for (int k = 0; k < d; ++k) {
      x[k] = L.coord(k, idx[k]);
      v[k] = L.coord(d + k, idx[d + k]);
    }
    const Characteristic fwd = trace(frozen, T, 0.0, x, v, sub);
    const Characteristic back = trace(frozen, 0.0, T, fwd.x.data(), fwd.v.data(), sub);
    for (int k = 0; k < d; ++k) {
      round_trip = std::max({round_trip, std::abs(back.x[k] - x[k]), std::abs(back.v[k] - v[k])});
      reach = std::max({reach, std::abs(fwd.x[k] - x[k]), std::abs(fwd.v[k] - v[k])});
    }
    det_dev = std::max(det_dev, std::abs(flow_jacobian_det(frozen, T, 0.0, x, v, sub, 1e-4) - 1.0));
  }
  save_json(join(c.out, "flow.json"), {{"t_end", T},
                                       {"substeps", sub},
                                       {"seeds", pick.size()},
                                       {"round_trip", round_trip},
                                       {"jacobian_det_deviation", det_dev},
                                       {"max_displacement", reach}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hvp: wave-density Vlasov-Poisson solver and diagnostics"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (overrides HVP_THREADS)")->check(CLI::PositiveNumber);

  std::string config, out, snapshot;
  auto with_config = [&](CLI::App* s) {
    s->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
    s->add_option("-o,--out", out, "output directory (default output.dir)");
  };

  std::string init_path = "hvp.cfg";
  bool force = false;
  auto* init = app.add_subcommand("init", "write a config with every default spelled out");
  init->add_option("path", init_path, "target file");
  init->add_flag("--force", force, "overwrite an existing file");

  int dump_every = -1;
  auto* run_cmd = app.add_subcommand("run", "transport stepper, time series CSV and snapshots");
  with_config(run_cmd);
  run_cmd->add_option("--dump-every", dump_every, "snapshot every n steps (default output.dump_every)");

  auto* picard = app.add_subcommand("picard", "Picard iteration over the whole interval");
  with_config(picard);

  double kappa = 6.0, p = 2.0, radius_max = -1.0;
  std::uint64_t budget = 512;
  bool grad = false;
  std::string norms_out;
  auto* norms = app.add_subcommand("norms", "A/B norm report of a snapshot as JSON");
  norms->add_option("snapshot", snapshot, "snapshot file")->required()->check(CLI::ExistingFile);
  norms->add_option("--kappa", kappa, "weight exponent");
  norms->add_option("--p", p, "integrability exponent");
  norms->add_option("--radius-max", radius_max, "largest radius (default half box diagonal)");
  norms->add_option("--budget-mb", budget, "memory budget for dilations");
  norms->add_flag("--gradient", grad, "also the B norm with first derivatives");
  norms->add_option("-o,--out", norms_out, "write JSON here instead of stdout");

  auto* tuple = app.add_subcommand("tuple", "characteristic tuple (rho, F, phi, K) of a field");
  with_config(tuple);
  tuple->add_option("--snapshot", snapshot, "field to use instead of the config profile");

  auto* diagnose = app.add_subcommand("diagnose", "energies, moments and norms of one field");
  with_config(diagnose);
  diagnose->add_option("--snapshot", snapshot, "field to use instead of the config profile");

  std::vector<std::string> snaps;
  auto* monitor = app.add_subcommand("monitor", "globality monitors along a trajectory");
  with_config(monitor);
  monitor->add_option("--snapshots", snaps, "trajectory snapshots (default: run the config)");

  double threshold = 5e-2;
  auto* compare_cmd = app.add_subcommand("compare", "|alpha|^2 against the classical Vlasov oracle");
  with_config(compare_cmd);
  compare_cmd->add_option("--threshold", threshold, "relative L1 gap budget at the final time");

  double gc = 0.0;
  auto* gauge = app.add_subcommand("gauge", "paired runs with and without a constant phase rate");
  with_config(gauge);
  auto* gc_opt = gauge->add_option("--c", gc, "phase rate (default diagnostics.gauge_c)");

  int seeds = 64;
  auto* flow = app.add_subcommand("flow", "characteristics of the frozen initial force");
  with_config(flow);
  flow->add_option("--snapshot", snapshot, "field to use instead of the config profile");
  flow->add_option("--seeds", seeds, "number of traced nodes")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (threads > 0) set_threads(threads);

  try {
    if (init->parsed()) return cmd_init(init_path, force);
    if (norms->parsed()) return cmd_norms(snapshot, kappa, p, radius_max, budget, grad, norms_out);
    const Context c = load(config, out);
    if (run_cmd->parsed()) return cmd_run(c, dump_every);
    if (picard->parsed()) return cmd_picard(c);
    if (tuple->parsed()) return cmd_tuple(c, snapshot);
    if (diagnose->parsed()) return cmd_diagnose(c, snapshot);
    if (monitor->parsed()) return cmd_monitor(c, snaps);
    if (compare_cmd->parsed()) return cmd_compare(c, threshold);
    if (gauge->parsed()) return cmd_gauge(c, gc_opt->count() ? gc : c.cfg.diagnostics.gauge_c);
    if (flow->parsed()) return cmd_flow(c, snapshot, seeds);
  } catch (const Error& e) {
    std::cerr << "hvp: " << e.what() << "\n";
    return e.numerical() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "hvp: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
