#include <doctest.h>

#include "corpus.hpp"
#include "hvp/chartuple.hpp"
#include "hvp/oracle.hpp"
#include "hvp/profile.hpp"

using namespace hvp;

namespace {

double f0(double x, double v) { return std::exp(-x * x / 0.5 - (v - 0.2) * (v - 0.2) / 0.72); }

RealField sample_f(const PhaseGrid& g, double t) {
  RealField f(g.phase);
  int idx[2];
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.phase.unravel(i, idx);
    const double v = g.phase.coord(1, idx[1]);
    f[i] = f0(g.phase.coord(0, idx[0]) - t * v, v);
  }
  return f;
}

}  // namespace

TEST_CASE("zero kernel: one Vlasov step is free streaming, second order") {
  std::vector<double> hs, errs;
  for (int n : {32, 64, 128}) {
    const PhaseGrid g = test::cube_grid(1, n, 4.0);
    const RealField f1 = vlasov_step(sample_f(g, 0.0), make_kernel(KernelKind::Zero, 1), 0.3, StepMode::Pc1);
    hs.push_back(g.x.h[0]);
    errs.push_back((f1.values - sample_f(g, 0.3).values).cwiseAbs().maxCoeff());
  }
  CHECK(test::fitted_order(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("coupled run: mass kept, f nonnegative, clipping within budget") {
  // Multilinear transport spreads f by about h |v| per unit time, so on this
  // coarse grid 50 steps have to stay short for the mass to stay in the box.
  const PhaseGrid g = test::cube_grid(3, 6, 3.0);
  AnalyticProfile p;
  p.sigma_x = 0.7;
  p.sigma_v = 0.7;
  const RealField f = modulus_squared(sample(g, p));
  const Convolver conv(g.x, make_kernel(KernelKind::Newtonian, 3, 1.0));
  SolverConfig c;
  c.dt = 0.005;
  c.t_end = 0.25;
  c.diagnostics = false;
  const DensityTrajectory tr = run_vlasov(f, conv, c);
  CHECK(tr.times.size() == 2);
  CHECK(tr.mass_drift <= 0.01);
  CHECK(tr.f.back().values.minCoeff() >= 0.0);
  CHECK(tr.clipped_mass <= 1e-4 * integral(f));
}

TEST_CASE("compare: zero gap at t = 0 and shared density code") {
  const PhaseGrid g = test::cube_grid(3, 6, 3.0);
  const WaveField a = test::random_smooth(g.phase, 4);
  const Convolver conv(g.x, make_kernel(KernelKind::Newtonian, 3));
  SolverConfig c;
  c.dt = 0.1;
  c.t_end = 0.2;
  c.keep_every = 1;
  c.diagnostics = false;
  const RunResult r = run(a, conv, c);
  const DensityTrajectory d = run_vlasov(modulus_squared(a), conv, c);
  CHECK(spatial_density(a).values == d.rho.front().values);
  const auto rows = compare(r.trajectory, d);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].l1 == 0.0);
  CHECK(rows[0].linf == 0.0);
  CHECK(rows[2].rel_l1 > 0.0);
}

TEST_CASE("compare: zero kernel with node-aligned feet agrees to rounding") {
  // v nodes at odd multiples of h_v / 2 and dt = 2 h_x / h_v: every foot is a node.
  GridConfig gc;
  gc.d = 1;
  gc.nx = {64};
  gc.nv = {8};
  gc.x_lo = {-8};
  gc.x_hi = {8};
  gc.v_lo = {-4};
  gc.v_hi = {4};
  const PhaseGrid g = make_grid(gc);
  AnalyticProfile p;
  p.k = {0.7};
  p.sigma_v = 1.0;
  const WaveField a = sample(g, p);
  const Convolver conv(g.x, make_kernel(KernelKind::Zero, 1));
  SolverConfig c;
  c.dt = 2.0 * g.x.h[0];
  c.t_end = 5 * c.dt;
  c.keep_every = 1;
  c.diagnostics = false;
  const auto rows = compare(run(a, conv, c).trajectory, run_vlasov(modulus_squared(a), conv, c));
  for (const auto& r : rows) CHECK(r.rel_linf <= 1e-10);
}

TEST_CASE("compare: guards") {
  const PhaseGrid g = test::cube_grid(1, 8, 2.0), g2 = test::cube_grid(1, 12, 2.0);
  const Convolver conv(g.x, make_kernel(KernelKind::Zero, 1)), conv2(g2.x, make_kernel(KernelKind::Zero, 1));
  SolverConfig c;
  c.dt = 0.1;
  c.t_end = 0.1;
  c.diagnostics = false;
  const auto a = run(test::random_smooth(g.phase, 1), conv, c);
  const auto d = run_vlasov(modulus_squared(test::random_smooth(g2.phase, 1)), conv2, c);
  CHECK_THROWS_AS(compare(a.trajectory, d), Error);
}
