#include "hvp/solver.hpp"

#include <cmath>
#include <sstream>

#include "hvp/diagnostics.hpp"
#include "hvp/norms.hpp"

namespace hvp {

StepMode parse_step_mode(const std::string& s) {
  if (s == "frozen") return StepMode::Frozen;
  if (s == "pc1") return StepMode::Pc1;
  throw Error(ErrorKind::ValidationError, "unknown step mode '" + s + "'");
}

std::string to_string(StepMode m) { return m == StepMode::Frozen ? "frozen" : "pc1"; }

int SolverConfig::steps() const { return static_cast<int>(std::llround(t_end / dt)); }

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorKind::ValidationError, "solver.dt must be positive");
  if (!(t_end >= dt * (1.0 - 1e-12))) throw Error(ErrorKind::ValidationError, "solver.t_end must be at least dt");
  if (std::abs(steps() * dt - t_end) > 1e-9 * t_end)
    throw Error(ErrorKind::ValidationError, "solver.t_end must be a multiple of solver.dt");
  if (substeps < 1) throw Error(ErrorKind::ValidationError, "solver.substeps must be at least 1");
  if (picard_n_max < 1) throw Error(ErrorKind::ValidationError, "solver.picard_n_max must be at least 1");
}

WaveField pull_back(const WaveField& source, const ForceSampler& sampler, double s, double t, int substeps,
                    double gauge_c) {
  const Lattice& L = source.lattice;
  const int d = L.dim() / 2;
  if (d != sampler.d()) throw Error(ErrorKind::GridMismatch, "sampler dimension differs from the field");
  WaveField out(L);
  const cplx gauge(0.0, gauge_c * (t - s));
  const bool with_k = sampler.has_phase_force() || gauge_c != 0.0;
  parallel_for_checked(out.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    L.unravel(i, idx);
    double x[6], v[6];
    for (int a = 0; a < d; ++a) {
      x[a] = L.coord(a, idx[a]);
      v[a] = L.coord(d + a, idx[d + a]);
    }
    const Characteristic c = trace(sampler, s, t, x, v, substeps, sampler.has_phase_force());
    double z[12];
    for (int a = 0; a < d; ++a) {
      z[a] = c.x[a];
      z[d + a] = c.v[a];
    }
    const cplx foot = make_stencil(L, z).apply(source.values);
    out[i] = with_k ? foot * std::exp(c.k_integral + gauge) : foot;
  });
  if (!all_finite(out)) throw Error(ErrorKind::NonFinite, "transported field is not finite");
  return out;
}

StepResult transport_step(const WaveField& alpha, const Convolver& conv, double dt, StepMode mode, int substeps,
                          double gauge_c) {
  StepResult r;
  r.tuple = characteristic_tuple(alpha, conv);
  const ForceSampler frozen({0.0}, {r.tuple.force}, {r.tuple.phase_force});
  WaveField predicted = pull_back(alpha, frozen, 0.0, dt, substeps, gauge_c);
  if (mode == StepMode::Frozen) {
    r.alpha = std::move(predicted);
    return r;
  }
  CharacteristicTuple next = characteristic_tuple(predicted, conv);
  const ForceSampler corrected({0.0, dt}, {r.tuple.force, next.force}, {r.tuple.phase_force, next.phase_force});
  r.alpha = pull_back(alpha, corrected, 0.0, dt, substeps, gauge_c);
  return r;
}

WaveField transport_step(const WaveField& alpha, const InteractionKernel& kernel, double dt, StepMode mode,
                         int substeps) {
  const PhaseGrid g = split_phase(alpha.lattice);
  const Convolver conv(g.x, kernel);
  return transport_step(alpha, conv, dt, mode, substeps).alpha;
}

RunResult run(const WaveField& alpha0, const Convolver& conv, const SolverConfig& cfg) {
  cfg.validate();
  RunResult res;
  Trajectory& tr = res.trajectory;
  tr.grid = split_phase(alpha0.lattice);
  tr.provenance = "transport";
  const int steps = cfg.steps();
  WaveField alpha = alpha0;
  const double l2_0 = lp_norm(alpha, 2.0);
  tr.times.push_back(0.0);
  tr.fields.push_back(alpha);
  for (int n = 0; n < steps; ++n) {
    const double t = n * cfg.dt;
    StepResult r;
    try {
      r = transport_step(alpha, conv, cfg.dt, cfg.mode, cfg.substeps, cfg.gauge_c);
    } catch (const Error& e) {
      if (!e.numerical()) throw;
      res.ok = false;
      res.accepted = false;
      res.message = e.what();
      return res;
    }
    if (cfg.diagnostics) tr.rows.push_back(step_row(t, alpha, r.tuple, conv, cfg));
    alpha = std::move(r.alpha);
    const double l2 = lp_norm(alpha, 2.0);
    if (l2_0 > 0.0) tr.l2_drift = std::max(tr.l2_drift, std::abs(l2 / l2_0 - 1.0));
    const bool last = n + 1 == steps;
    if (last || (cfg.keep_every > 0 && (n + 1) % cfg.keep_every == 0)) {
      tr.times.push_back((n + 1) * cfg.dt);
      tr.fields.push_back(alpha);
    }
    if (l2_0 > 0.0 && l2 > cfg.norm_guard * l2_0) {
      if (tr.times.back() != (n + 1) * cfg.dt) {
        tr.times.push_back((n + 1) * cfg.dt);
        tr.fields.push_back(alpha);
      }
      std::ostringstream os;
      os << "norm guard tripped at t = " << (n + 1) * cfg.dt << ": ||alpha||_2 grew by " << l2 / l2_0;
      res.ok = false;
      res.message = "BlowUp: " + os.str();
      res.accepted = false;
      return res;
    }
  }
  if (cfg.diagnostics) tr.rows.push_back(step_row(steps * cfg.dt, alpha, characteristic_tuple(alpha, conv), conv, cfg));
  res.accepted = tr.l2_drift <= cfg.l2_tolerance;
  return res;
}

PicardResult picard_solve(const WaveField& alpha0, const Convolver& conv, const SolverConfig& cfg) {
  cfg.validate();
  const int m = cfg.steps();
  std::vector<double> times(m + 1);
  for (int j = 0; j <= m; ++j) times[j] = j * cfg.dt;
  std::vector<WaveField> current(m + 1, alpha0);
  PicardResult res;
  PicardLog& log = res.log;
  for (int n = 0; n < cfg.picard_n_max; ++n) {
    std::vector<SpatialVectorField> F;
    std::vector<ComplexSpatialField> K;
    for (int j = 0; j <= m; ++j) {
      CharacteristicTuple t = characteristic_tuple(current[j], conv);
      F.push_back(std::move(t.force));
      K.push_back(std::move(t.phase_force));
    }
    const ForceSampler sampler(times, std::move(F), std::move(K));
    std::vector<WaveField> next(m + 1);
    next[0] = alpha0;
    for (int j = 1; j <= m; ++j) next[j] = pull_back(alpha0, sampler, 0.0, times[j], cfg.substeps * j, cfg.gauge_c);
    double dist = 0.0;
    for (int j = 0; j <= m; ++j)
      dist = std::max(dist, a_norm(next[j] - current[j], cfg.kappa, 2.0, cfg.radius_set).a_norm);
    log.distance.push_back(dist);
    current = std::move(next);
    if (dist < cfg.picard_tol) {
      log.converged = true;
      log.iterations = n;
      break;
    }
    log.iterations = n + 1;
    if (n >= 3 && dist >= log.distance[n - 1]) {
      std::ostringstream os;
      os << "Picard distance did not decrease at n = " << n << " (" << dist << " >= " << log.distance[n - 1] << ")";
      throw Error(ErrorKind::NoContraction, os.str());
    }
  }
  Trajectory& tr = res.trajectory;
  tr.grid = split_phase(alpha0.lattice);
  tr.provenance = "picard(" + std::to_string(log.iterations) + ")";
  tr.times = times;
  const double l2_0 = lp_norm(alpha0, 2.0);
  for (int j = 0; j <= m; ++j) {
    if (cfg.diagnostics) tr.rows.push_back(step_row(times[j], current[j], characteristic_tuple(current[j], conv), conv, cfg));
    if (l2_0 > 0.0) tr.l2_drift = std::max(tr.l2_drift, std::abs(lp_norm(current[j], 2.0) / l2_0 - 1.0));
  }
  tr.fields = std::move(current);
  return res;
}

std::vector<double> solution_distance(const Trajectory& a, const Trajectory& b, double kappa,
                                      const std::vector<double>& radius_set) {
  if (a.grid != b.grid) throw Error(ErrorKind::GridMismatch, "trajectories live on different grids");
  if (a.times.size() != b.times.size()) throw Error(ErrorKind::GridMismatch, "trajectories have different sample times");
  std::vector<double> gap;
  for (std::size_t j = 0; j < a.times.size(); ++j) {
    if (std::abs(a.times[j] - b.times[j]) > 1e-12 * (1.0 + std::abs(a.times[j])))
      throw Error(ErrorKind::GridMismatch, "trajectories have different sample times");
    gap.push_back(a_norm(a.fields[j] - b.fields[j], kappa, 2.0, radius_set).a_norm);
  }
  return gap;
}

namespace {

// L a = v.grad_x a + F.grad_v a - K a at node i from centred differences.
cplx apply_operator(const WaveField& a, const CharacteristicTuple& t, const PhaseGrid& g, std::size_t i, const int* idx) {
  const Lattice& L = a.lattice;
  const int d = g.d;
  const std::size_t ix = i / g.nv_total();
  auto diff = [&](int axis) {
    const std::size_t st = L.stride[axis];
    const cplx up = idx[axis] + 1 < L.n[axis] ? a[i + st] : cplx{};
    const cplx dn = idx[axis] > 0 ? a[i - st] : cplx{};
    return (up - dn) * (0.5 / L.h[axis]);
  };
  cplx s{};
  for (int k = 0; k < d; ++k) {
    s += L.coord(d + k, idx[d + k]) * diff(k);
    s += t.force.comp[k][static_cast<Eigen::Index>(ix)] * diff(d + k);
  }
  s -= t.phase_force[ix] * a[i];
  return s;
}

}  // namespace

double pde_residual(const WaveField& a0, const WaveField& a1, double dt, const Convolver& conv, int margin) {
  require_same(a0.lattice, a1.lattice, "pde_residual");
  const PhaseGrid g = split_phase(a0.lattice);
  const CharacteristicTuple t0 = characteristic_tuple(a0, conv), t1 = characteristic_tuple(a1, conv);
  const Lattice& L = a0.lattice;
  return parallel_max(L.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    L.unravel(i, idx);
    for (int a = 0; a < L.dim(); ++a)
      if (idx[a] < margin || idx[a] >= L.n[a] - margin) return 0.0;
    const cplx r = (a1[i] - a0[i]) / dt + 0.5 * (apply_operator(a0, t0, g, i, idx) + apply_operator(a1, t1, g, i, idx));
    return std::abs(r);
  });
}

}  // namespace hvp
