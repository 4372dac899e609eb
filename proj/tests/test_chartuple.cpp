#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "hvp/chartuple.hpp"
#include "hvp/profile.hpp"
#include "lipschitz.hpp"

using namespace hvp;

namespace {

PhaseGrid grid(int d, int n, double L) {
  GridConfig c;
  c.d = d;
  c.nx.assign(d, n);
  c.nv.assign(d, n);
  c.x_lo.assign(d, -L);
  c.x_hi.assign(d, L);
  c.v_lo.assign(d, -L);
  c.v_hi.assign(d, L);
  return make_grid(c);
}

bool interior(const Lattice& l, std::size_t i) {
  int idx[kMaxDim];
  l.unravel(i, idx);
  for (int a = 0; a < l.dim(); ++a)
    if (idx[a] == 0 || idx[a] == l.n[a] - 1) return false;
  return true;
}

}  // namespace

TEST_CASE("centred differences") {
  const PhaseGrid g = grid(1, 10, 2);
  WaveField c(g.phase);
  c.values.setConstant(cplx(2.0, -1.0));
  for (const auto& d : gradient(c, Axes::All))
    for (std::size_t i = 0; i < d.size(); ++i)
      if (interior(g.phase, i)) CHECK(d[i] == cplx(0.0));

  WaveField lin(g.phase);
  int idx[2];
  for (std::size_t i = 0; i < lin.size(); ++i) {
    g.phase.unravel(i, idx);
    lin[i] = cplx(1.5, 0.5) * g.phase.coord(1, idx[1]) + 3.0;
  }
  const auto dv = partial(lin, 1);
  for (std::size_t i = 0; i < lin.size(); ++i)
    if (interior(g.phase, i)) CHECK(std::abs(dv[i] - cplx(1.5, 0.5)) <= 1e-13);

  // plane wave in v: grad_v alpha = i k alpha, second order
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    const PhaseGrid gg = grid(1, n, 2);
    WaveField w(gg.phase);
    for (std::size_t i = 0; i < w.size(); ++i) {
      gg.phase.unravel(i, idx);
      w[i] = std::polar(1.0, 1.3 * gg.phase.coord(1, idx[1]));
    }
    const auto d = partial(w, 1);
    double e = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (interior(gg.phase, i)) e = std::max(e, std::abs(d[i] - cplx(0.0, 1.3) * w[i]));
    hs.push_back(gg.v.h[0]);
    errs.push_back(e);
  }
  CHECK(test::fitted_order(hs, errs) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("spatial density") {
  const PhaseGrid g = grid(2, 24, 3);
  CHECK(sup_norm(spatial_density(WaveField(g.phase))) == 0.0);

  // separable alpha = g(x) h(v) with ||h||_2 = 1
  AnalyticProfile p;
  p.sigma_x = 0.6;
  p.sigma_v = 0.5;
  p.normalize = false;
  const WaveField a = sample(g, p);
  AnalyticProfile pv = p;
  const double hnorm2 = std::pow(2 * std::numbers::pi * p.sigma_v * p.sigma_v, 0.5 * g.d);
  const SpatialField rho = spatial_density(a);
  int idx[2];
  double err = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    g.x.unravel(i, idx);
    double r2 = 0;
    for (int k = 0; k < 2; ++k) r2 += std::pow(g.x.coord(k, idx[k]), 2);
    const double gx2 = std::exp(-r2 / (2 * p.sigma_x * p.sigma_x));
    err = std::max(err, std::abs(rho[i] / hnorm2 - gx2));
  }
  CHECK(err <= 1e-6);
  CHECK(rho.values.minCoeff() >= 0.0);
  const double l2 = lp_norm(a, 2.0);
  CHECK(test::rel_diff(integral(rho), l2 * l2) <= 1e-12);
}

TEST_CASE("phase density") {
  const PhaseGrid g = grid(2, 10, 2);
  const WaveField real(g.phase, test::random_smooth(g.phase, 5).values.real().cast<cplx>());
  const auto phi0 = phase_density(real);
  for (const auto& c : phi0.comp) CHECK(c.cwiseAbs().maxCoeff() <= 1e-12);

  const WaveField a = test::random_smooth(g.phase, 6);
  const auto phi = phase_density(a);
  double re = 0, mag = 0;
  for (const auto& c : phi.comp) {
    re = std::max(re, c.real().cwiseAbs().maxCoeff());
    mag = std::max(mag, c.cwiseAbs().maxCoeff());
  }
  CHECK(re <= 1e-10 * mag);

  const cplx s(0.6, -1.1);
  const auto phis = phase_density(scale(s, a));
  for (int k = 0; k < 2; ++k)
    CHECK((phis.comp[k] - std::norm(s) * phi.comp[k]).cwiseAbs().maxCoeff() <= 1e-12 * mag);

  // alpha = g e^{i k.v}: phi = i k rho, second order in h
  std::vector<double> hs, errs;
  for (int n : {12, 24, 48}) {
    const PhaseGrid gg = grid(1, n, 3);
    AnalyticProfile p;
    p.k = {1.2};
    p.x0 = {0.2};
    const WaveField w = sample(gg, p);
    const auto ph = phase_density(w);
    const SpatialField rho = spatial_density(w);
    hs.push_back(gg.v.h[0]);
    errs.push_back((ph.comp[0] - cplx(0.0, 1.2) * rho.values.cast<cplx>()).cwiseAbs().maxCoeff() / sup_norm(rho));
  }
  CHECK(test::fitted_order(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("characteristic tuple") {
  const PhaseGrid g = grid(3, 6, 3);
  const auto k = make_kernel(KernelKind::Newtonian, 3);
  const Convolver conv(g.x, k);
  const auto t0 = characteristic_tuple(WaveField(g.phase), conv);
  CHECK(sup_norm(t0.rho) == 0.0);
  CHECK(sup_norm(t0.force) == 0.0);
  CHECK(sup_norm(t0.phase_density) == 0.0);
  CHECK(sup_norm(t0.phase_force) == 0.0);

  const WaveField a = test::random_smooth(g.phase, 7);
  const auto tz = characteristic_tuple(a, make_kernel(KernelKind::Zero, 3));
  const auto tn = characteristic_tuple(a, conv);
  CHECK(sup_norm(tz.force) == 0.0);
  CHECK(sup_norm(tz.phase_force) == 0.0);
  CHECK(tz.rho.values == tn.rho.values);
  for (int c = 0; c < 3; ++c) CHECK(tz.phase_density.comp[c] == tn.phase_density.comp[c]);

  // Separable plane-wave Gaussian: phi = i k_eff rho with a spatially constant
  // k_eff (the v sum factors out), so K = i k_eff . F exactly. k_eff -> k is
  // the refinement check in "phase density".
  AnalyticProfile p;
  p.k = {0.7, -0.4, 1.1};
  p.sigma_x = p.sigma_v = 0.6;
  const WaveField w = sample(g, p);
  const auto t = characteristic_tuple(w, conv);
  Vec<cplx> expect = Vec<cplx>::Zero(static_cast<Eigen::Index>(g.nx_total()));
  std::size_t imax = 0;
  t.rho.values.maxCoeff(&imax);
  for (int c = 0; c < 3; ++c) {
    const double keff = t.phase_density.comp[c][static_cast<Eigen::Index>(imax)].imag() / t.rho[imax];
    const Vec<cplx> pred = cplx(0.0, keff) * t.rho.values.cast<cplx>();
    CHECK((t.phase_density.comp[c] - pred).cwiseAbs().maxCoeff() <= 1e-12 * pred.cwiseAbs().maxCoeff());
    expect += cplx(0.0, keff) * t.force.comp[c].cast<cplx>();
  }
  CHECK((t.phase_force.values - expect).cwiseAbs().maxCoeff() <= 1e-8 * expect.cwiseAbs().maxCoeff());
}

TEST_CASE("property: tuple invariants on a corpus") {
  const PhaseGrid g = grid(3, 6, 3);
  const Convolver conv(g.x, make_kernel(KernelKind::Newtonian, 3), ConvMethod::Direct);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const WaveField a = test::random_smooth(g.phase, 100 + s);
    const auto t = characteristic_tuple(a, conv);
    const double l2 = lp_norm(a, 2.0);
    CHECK(t.rho.values.minCoeff() >= 0.0);
    CHECK(test::rel_diff(integral(t.rho), l2 * l2) <= 1e-10);
    double re_phi = 0.0, mag_phi = 0.0;
    for (const auto& c : t.phase_density.comp) {
      re_phi = std::max(re_phi, c.real().cwiseAbs().maxCoeff());
      mag_phi = std::max(mag_phi, c.cwiseAbs().maxCoeff());
    }
    CHECK(re_phi <= 1e-10 * mag_phi);
    CHECK(t.phase_force.values.real().cwiseAbs().maxCoeff() <= 1e-12 * std::max(sup_norm(t.phase_force), 1e-300));
    // self-force cancellation
    double net = 0.0;
    for (int c = 0; c < 3; ++c) net = std::max(net, std::abs(integral(RealField(g.x, t.rho.values.cwiseProduct(t.force.comp[c])))));
    CHECK(net <= 1e-8 * lp_norm(t.rho, 1.0) * sup_norm(t.force));
  }
}

TEST_CASE("property: Lipschitz estimates of the tuple") {
  const PhaseGrid g = grid(3, 6, 3);
  const Convolver conv(g.x, make_kernel(KernelKind::Newtonian, 3));
  const double kappa = 6.0;
  const auto radii = test::lipschitz_radii(g.phase, kappa, 256u << 20);
  std::vector<double> r3, r6;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto [a1, a2] = test::perturbed_pair(g.phase, 300 + s);
    const auto row = test::lipschitz_row(a1, a2, conv, kappa, radii);
    for (int i : {0, 1, 3, 4}) CHECK(row.lhs[i] < row.rhs[i]);
    r3.push_back(row.lhs[2] / row.rhs[2]);
    r6.push_back(row.lhs[5] / row.rhs[5]);
  }
  for (const auto* r : {&r3, &r6}) CHECK(*std::max_element(r->begin(), r->end()) <= 10.0 * *std::min_element(r->begin(), r->end()));
}
