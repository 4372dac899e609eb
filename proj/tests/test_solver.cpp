#include <doctest.h>

#include "corpus.hpp"
#include "hvp/norms.hpp"
#include "hvp/profile.hpp"
#include "hvp/solver.hpp"

using namespace hvp;

namespace {

AnalyticProfile gaussian(int d, double sx, double sv, double k = 0.0) {
  AnalyticProfile p;
  p.sigma_x = sx;
  p.sigma_v = sv;
  p.x0.assign(d, 0.1);
  p.v0.assign(d, -0.05);
  p.k.assign(d, k);
  return p;
}

// alpha0(x - t v, v)
WaveField free_stream(const PhaseGrid& g, const AnalyticProfile& p, double t) {
  WaveField out(g.phase);
  const int d = g.d;
  int idx[kMaxDim];
  for (std::size_t i = 0; i < out.size(); ++i) {
    g.phase.unravel(i, idx);
    double x[6], v[6];
    for (int a = 0; a < d; ++a) {
      v[a] = g.phase.coord(d + a, idx[d + a]);
      x[a] = g.phase.coord(a, idx[a]) - t * v[a];
    }
    out[i] = evaluate(p, d, x, v);
  }
  return out;
}

SolverConfig config(double dt, double t_end) {
  SolverConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.diagnostics = false;
  return c;
}

}  // namespace

TEST_CASE("zero kernel: one step is free streaming, second order in h") {
  const auto zero = make_kernel(KernelKind::Zero, 1);
  const auto p = gaussian(1, 0.5, 0.6, 1.0);
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    const PhaseGrid g = test::cube_grid(1, n, 4.0);
    const WaveField a1 = transport_step(sample(g, p), zero, 0.3, StepMode::Pc1);
    hs.push_back(g.x.h[0]);
    errs.push_back((a1.values - free_stream(g, p, 0.3).values).cwiseAbs().maxCoeff());
  }
  CHECK(test::fitted_order(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("modulus at a node equals the modulus at the foot") {
  const PhaseGrid g = test::cube_grid(3, 6, 3.0);
  const Convolver conv(g.x, make_kernel(KernelKind::Newtonian, 3, 2.0));
  const WaveField a = test::random_smooth(g.phase, 3);
  const auto t = characteristic_tuple(a, conv);
  const ForceSampler s({0.0}, {t.force}, {t.phase_force});
  const double dt = 0.2;
  const WaveField out = pull_back(a, s, 0.0, dt, 4);
  int idx[6];
  for (std::size_t i = 0; i < out.size(); i += 131) {
    g.phase.unravel(i, idx);
    double x[3], v[3];
    for (int k = 0; k < 3; ++k) {
      x[k] = g.phase.coord(k, idx[k]);
      v[k] = g.phase.coord(3 + k, idx[3 + k]);
    }
    const Characteristic c = trace(s, 0.0, dt, x, v, 4, true);
    const double z[6] = {c.x[0], c.x[1], c.x[2], c.v[0], c.v[1], c.v[2]};
    const double foot = std::abs(make_stencil(g.phase, z).apply(a.values));
    CHECK(std::abs(c.k_integral.real()) <= 1e-12 * std::max(std::abs(c.k_integral), 1e-300));
    CHECK(std::abs(std::abs(out[i]) - foot) <= 1e-12 * std::max(foot, 1e-300));
  }
}

TEST_CASE("pc1 and frozen differ at second order per step") {
  const PhaseGrid g = test::cube_grid(3, 6, 3.0);
  const Convolver conv(g.x, make_kernel(KernelKind::Newtonian, 3, 4.0));
  const WaveField a = sample(g, gaussian(3, 0.6, 0.6, 0.8));
  std::vector<double> gap;
  for (double dt : {0.2, 0.1, 0.05}) {
    const WaveField p = transport_step(a, conv, dt, StepMode::Pc1, 4).alpha;
    const WaveField f = transport_step(a, conv, dt, StepMode::Frozen, 4).alpha;
    gap.push_back((p.values - f.values).cwiseAbs().maxCoeff());
  }
  CHECK(gap[0] / gap[1] == doctest::Approx(4.0).epsilon(0.25));
  CHECK(gap[1] / gap[2] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("run: zero kernel tracks free streaming, keeps L2, records rows") {
  const PhaseGrid g = test::cube_grid(1, 96, 5.0);
  const auto p = gaussian(1, 0.5, 0.5);
  const Convolver conv(g.x, make_kernel(KernelKind::Zero, 1));
  SolverConfig c = config(0.1, 1.0);
  c.diagnostics = true;
  c.keep_every = 5;
  const RunResult r = run(sample(g, p), conv, c);
  CHECK(r.ok);
  CHECK(r.accepted);
  CHECK(r.trajectory.rows.size() == 11);
  CHECK(r.trajectory.times.size() == 3);
  CHECK(r.trajectory.times.back() == doctest::Approx(1.0));
  for (const auto& row : r.trajectory.rows) CHECK(row.force_sup == 0.0);
  const WaveField exact = free_stream(g, p, 1.0);
  CHECK(lp_norm(r.trajectory.fields.back() - exact, 2.0) / lp_norm(exact, 2.0) <= 0.05);
  CHECK(r.trajectory.l2_drift <= c.l2_tolerance);
}

TEST_CASE("run: guards") {
  const PhaseGrid g = test::cube_grid(1, 8, 2.0);
  const Convolver conv(g.x, make_kernel(KernelKind::Zero, 1));
  CHECK_THROWS_AS(run(sample(g, gaussian(1, 0.5, 0.5)), conv, config(0.3, 1.0)), Error);
  CHECK_THROWS_AS(run(sample(g, gaussian(1, 0.5, 0.5)), conv, config(-0.1, 1.0)), Error);
  SolverConfig c = config(0.1, 0.5);
  c.norm_guard = 0.5;
  const RunResult r = run(sample(g, gaussian(1, 0.5, 0.5)), conv, c);
  CHECK_FALSE(r.ok);
  CHECK(r.message.find("BlowUp") == 0);
  CHECK_FALSE(r.accepted);
  CHECK(r.trajectory.fields.size() == 2);
}

TEST_CASE("Picard: zero kernel converges in one iteration, weak coupling contracts") {
  const PhaseGrid g = test::cube_grid(3, 6, 3.0);
  SolverConfig c = config(0.05, 0.2);
  c.radius_set = {0.0, 1.0};
  const WaveField a = sample(g, gaussian(3, 0.6, 0.6, 0.5));
  const Convolver zero(g.x, make_kernel(KernelKind::Zero, 3));
  const PicardResult z = picard_solve(a, zero, c);
  CHECK(z.log.converged);
  CHECK(z.log.iterations == 1);
  CHECK(z.log.distance.back() == 0.0);

  const Convolver weak(g.x, make_kernel(KernelKind::Newtonian, 3, 0.1));
  c.picard_tol = 1e-14;
  c.picard_n_max = 5;
  const PicardResult w = picard_solve(a, weak, c);
  for (std::size_t n = 2; n < w.log.distance.size(); ++n) {
    CHECK(w.log.distance[n] < w.log.distance[n - 1]);
    CHECK(w.log.distance[n] <= 0.5 * w.log.distance[n - 1]);
  }
  CHECK(w.trajectory.provenance.rfind("picard(", 0) == 0);
  CHECK(w.trajectory.fields.size() == 5);
}

TEST_CASE("solution distance") {
  const PhaseGrid g = test::cube_grid(3, 6, 3.0);
  const Convolver conv(g.x, make_kernel(KernelKind::Newtonian, 3));
  SolverConfig c = config(0.1, 0.3);
  c.keep_every = 1;
  const WaveField a = sample(g, gaussian(3, 0.6, 0.6, 0.5));
  const RunResult r1 = run(a, conv, c), r2 = run(a, conv, c);
  for (double x : solution_distance(r1.trajectory, r2.trajectory, 6.0, {0.0, 1.0})) CHECK(x == 0.0);

  // linear response of the gap to the size of the perturbation
  const WaveField b = test::random_smooth(g.phase, 8);
  const double e = 1e-3 * a_norm(a, 6.0, 2.0, {0.0, 1.0}).a_norm / a_norm(b, 6.0, 2.0, {0.0, 1.0}).a_norm;
  const RunResult p1 = run(a + scale(e, b), conv, c), p2 = run(a + scale(2 * e, b), conv, c);
  const auto g1 = solution_distance(r1.trajectory, p1.trajectory, 6.0, {0.0, 1.0});
  const auto g2 = solution_distance(r1.trajectory, p2.trajectory, 6.0, {0.0, 1.0});
  CHECK(g1[0] == doctest::Approx(1e-3 * a_norm(a, 6.0, 2.0, {0.0, 1.0}).a_norm).epsilon(1e-9));
  CHECK(g2[1] / g1[1] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("PDE residual: second order where feet land on nodes") {
  // Gamma = 0 and dt v / h_x integral at every v node: the update is exact
  // sampling, so the residual is the truncation error of the check itself.
  const auto p = gaussian(1, 0.5, 0.5);
  const double hv = 1.0;
  std::vector<double> hs, res;
  for (int nx : {64, 128, 256}) {
    GridConfig gc;
    gc.d = 1;
    gc.nx = {nx};
    gc.nv = {8};
    gc.x_lo = {-8};
    gc.x_hi = {8};
    gc.v_lo = {-4};
    gc.v_hi = {4};
    const PhaseGrid g = make_grid(gc);
    const double dt = 2.0 * g.x.h[0] / hv;
    const Convolver conv(g.x, make_kernel(KernelKind::Zero, 1));
    const WaveField a0 = sample(g, p);
    const WaveField a1 = transport_step(a0, conv, dt, StepMode::Pc1, 1).alpha;
    CHECK((a1.values - free_stream(g, p, dt).values).cwiseAbs().maxCoeff() <= 1e-13);
    hs.push_back(g.x.h[0]);
    res.push_back(pde_residual(a0, a1, dt, conv, 2));
  }
  CHECK(test::fitted_order(hs, res) >= 1.8);
}

TEST_CASE("property: stepping is bit-identical across thread counts") {
  const PhaseGrid g = test::cube_grid(3, 6, 3.0);
  const Convolver conv(g.x, make_kernel(KernelKind::Newtonian, 3));
  const WaveField a = test::random_smooth(g.phase, 12);
  const int saved = threads();
  set_threads(1);
  const WaveField one = transport_step(a, conv, 0.1, StepMode::Pc1, 4).alpha;
  set_threads(3);
  const WaveField three = transport_step(a, conv, 0.1, StepMode::Pc1, 4).alpha;
  set_threads(saved);
  CHECK(one.values == three.values);
}
