#include <doctest.h>

#include <numbers>
#include <random>

#include "corpus.hpp"
#include "oracles.hpp"
#include "hvp/chartuple.hpp"
#include "hvp/norms.hpp"

using namespace hvp;

namespace {

// Dilation by checking every pair of nodes.
RealField brute_dilation(const RealField& f, const Lattice& out_lattice, double R) {
  const Lattice& l = f.lattice;
  const int n = l.dim();
  RealField out(out_lattice);
  std::vector<int> zi(n), yi(n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out_lattice.unravel(i, zi.data());
    double m = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      l.unravel(j, yi.data());
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) {
        const double dz = out_lattice.coord(a, zi[a]) - l.coord(a, yi[a]);
        r2 += dz * dz;
      }
      if (r2 <= R * R * (1.0 + kBallSlack)) m = std::max(m, std::abs(f[j]));
    }
    out[i] = m;
  }
  return out;
}

}  // namespace

TEST_CASE("ball constant closed form") {
  const double omega3 = 4.0 / 3.0 * std::numbers::pi;
  CHECK(ball_constant(3, 3).value == doctest::Approx(1.0 / omega3).epsilon(1e-14));
  CHECK(ball_constant(3, 3).value == doctest::Approx(0.2387324).epsilon(1e-6));
  // a = b: the objective decreases toward 1/omega_b as R grows
  CHECK(test::numeric_ball_constant(3, 3) >= ball_constant(3, 3).value);
  CHECK(test::rel_diff(test::numeric_ball_constant(3, 3), ball_constant(3, 3).value) <= 1e-4);

  CHECK(ball_constant(6, 3).value == doctest::Approx(64.0 / omega3).epsilon(1e-14));
  CHECK(ball_constant(6, 3).value == doctest::Approx(15.2789).epsilon(1e-5));
  double rstar = 0;
  CHECK(test::rel_diff(test::numeric_ball_constant(6, 3, &rstar), ball_constant(6, 3).value) <= 1e-6);
  CHECK(rstar == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(ball_constant(2, 3), Error);
  CHECK_THROWS_AS(ball_constant(2, 0), Error);
}

TEST_CASE("property: ball constant matches numeric infimum") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ub(0.5, 8.0), ugap(0.05, 10.0);
  for (int s = 0; s < 20; ++s) {
    const double b = ub(rng), a = b + ugap(rng);
    CHECK(test::rel_diff(test::numeric_ball_constant(a, b), ball_constant(a, b).value) <= 1e-6);
  }
}

TEST_CASE("dilation: identity, brute force agreement, monotonicity") {
  const Lattice l1 = make_lattice({64}, {-2}, {2});
  const Lattice l2 = make_lattice({13, 9}, {-1, -1}, {1, 0.5});
  const Lattice l3 = make_lattice({7, 6, 5}, {-1, -1, -1}, {1, 1, 0.5});
  for (const Lattice* l : {&l1, &l2, &l3}) {
    const RealField f = test::random_smooth_real(*l, 17);
    CHECK(local_sup(f, 0.0).values == f.values);
    RealField prev = f;
    prev.values = prev.values.cwiseAbs();
    for (double R : {0.1, 0.25, 0.37, 0.6}) {
      const RealField pad = local_sup_padded(f, R);
      CHECK(pad.values == brute_dilation(f, pad.lattice, R).values);
      const RealField in = local_sup(f, R);
      CHECK((in.values.array() >= f.values.cwiseAbs().array()).all());
      CHECK((in.values.array() >= prev.values.array()).all());
      prev = in;
    }
  }
}

TEST_CASE("dilation of a ball indicator grows the radius by R") {
  const Lattice l = make_lattice({64}, {-4}, {4});
  RealField f(l);
  const double r = 1.0625;  // a node, so the sampled indicator is exact
  for (int i = 0; i < 64; ++i) f[i] = std::abs(l.coord(0, i)) <= r ? 1.0 : 0.0;
  for (double R : {0.3, 0.75, 1.6}) {
    const RealField g = local_sup(f, R);
    double edge = 0.0;
    for (int i = 0; i < 64; ++i)
      if (g[i] > 0.5) edge = std::max(edge, std::abs(l.coord(0, i)));
    CHECK(std::abs(edge - (r + R)) <= l.cell_diagonal());
  }
}

TEST_CASE("a_norm closed-form profile for a 1-D indicator") {
  const Lattice l = make_lattice({40}, {-2}, {2});
  RealField f(l);
  for (int i = 0; i < 40; ++i) f[i] = std::abs(l.coord(0, i)) <= 1.0 ? 1.0 : 0.0;
  CHECK(a_norm(RealField(l), 2.0, 1.0, {0.0, 0.5}).a_norm == 0.0);
  std::vector<double> radii{0.0};
  for (int j = 1; j <= 12; ++j) radii.push_back(j * l.h[0]);
  for (double kappa : {1.0, 1.5, 3.0}) {
    const NormReport r = a_norm(f, kappa, 1.0, radii);
    CHECK(r.a_norm == doctest::Approx(2.0).epsilon(1e-12));
    if (kappa > 1.0) CHECK(r.argmax_radius == 0.0);
    for (std::size_t j = 0; j < radii.size(); ++j)
      CHECK(r.radius_profile[j] == doctest::Approx(2.0 * std::pow(1.0 + radii[j], 1.0 - kappa)).epsilon(1e-12));
  }
}

TEST_CASE("a_norm guards") {
  const Lattice l = make_lattice({8, 8}, {-1, -1}, {1, 1});
  const RealField f = test::random_smooth_real(l, 1);
  CHECK_THROWS_AS(a_norm(f, 1.5, 2.0, {0.0}), Error);
  CHECK_THROWS_AS(a_norm(f, 2.0, 0.5, {0.0}), Error);
  CHECK_THROWS_AS(a_norm(f, 2.0, 2.0, {0.5}), Error);
}

TEST_CASE("radius sets") {
  const Lattice l = make_lattice({16, 16}, {-1, -1}, {1, 1});
  const auto r = default_radius_set(l);
  CHECK(r.front() == 0.0);
  CHECK(r[1] == doctest::Approx(l.cell_diagonal()));
  CHECK(r.back() <= 0.5 * l.box_diagonal() * (1 + 1e-12));
  CHECK(r.back() * std::sqrt(2.0) > 0.5 * l.box_diagonal());
  CHECK(fit_radius_set(l, r, 1) == std::vector<double>{0.0});
  CHECK(fit_radius_set(l, r, std::uint64_t{1} << 40) == r);
  CHECK(dilation_bytes(l, 0.5) > dilation_bytes(l, 0.2));
}

TEST_CASE("b_norm is the root sum of squares of its parts") {
  const Lattice l = make_lattice({16, 12}, {-1, -1}, {1, 1});
  CHECK(b_norm(WaveField(l), gradient(WaveField(l), Axes::All), 2.0, {0.0, 0.2}).b_norm == 0.0);
  const WaveField f = test::random_smooth(l, 4);
  const auto grad = gradient(f, Axes::All);
  const auto radii = default_radius_set(l);
  const NormReport r = b_norm(f, grad, 3.0, radii);
  double s = r.a_norm * r.a_norm;
  for (double a : r.per_derivative) s += a * a;
  CHECK(test::rel_diff(r.b_norm * r.b_norm, s) <= 1e-12);
  // nonincreasing in kappa
  CHECK(b_norm(f, grad, 4.0, radii).b_norm <= r.b_norm);
}

TEST_CASE("property: embedding, monotonicity, Hoelder and gradient inequalities") {
  const Lattice l1 = make_lattice({48}, {-2}, {2});
  const Lattice l2 = make_lattice({24, 20}, {-2, -1.5}, {2, 1.5});
  int checked = 0;
  for (const Lattice* l : {&l1, &l2}) {
    const double dim = l->dim();
    for (std::uint64_t s = 0; s < 50; ++s) {
      const test::Bumps bf(*l, 1000 + s), bg(*l, 5000 + s);
      const RealField f = bf.sample(*l), g = bg.sample(*l);
      const double kappa = dim + 0.5 + 0.5 * static_cast<double>(s % 5), lambda = dim + 1.0;
      // The sup embedding is attained at R* = dim / (kappa - dim); it has to be in the set.
      auto radii = default_radius_set(*l);
      radii.push_back(dim / (kappa - dim));
      const double p = 1.0 + 0.25 * static_cast<double>(s % 7);
      const double q = p / (p - 1.0);
      const double af = a_norm(f, kappa, p, radii).a_norm;
      CHECK(lp_norm(f, p) <= af);
      CHECK(sup_norm(f) <= std::pow(ball_constant(kappa, dim).value, 1.0 / p) * af);
      CHECK(a_norm(f, kappa + 1.5, p, radii).a_norm <= af);
      if (p > 1.0) {
        const RealField fg(*l, f.values.cwiseProduct(g.values));
        CHECK(a_norm(fg, kappa / p + lambda / q, 1.0, radii).a_norm <=
              af * a_norm(g, lambda, q, radii).a_norm * (1 + 1e-14));
      }
      CHECK(a_norm(f, kappa + p, p, radii).a_norm <=
            lp_norm(f, p) + a_norm(bf.gradient_magnitude(*l), kappa, p, radii).a_norm);
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("property: a_norm is bit-identical across thread counts") {
  const Lattice l = make_lattice({10, 10, 10, 10}, {-1, -1, -1, -1}, {1, 1, 1, 1});
  const WaveField f = test::random_smooth(l, 21);
  const auto radii = fit_radius_set(l, default_radius_set(l, 0.6), 64u << 20);
  const int saved = threads();
  set_threads(1);
  const NormReport r1 = a_norm(f, 6.0, 2.0, radii);
  set_threads(4);
  const NormReport r4 = a_norm(f, 6.0, 2.0, radii);
  set_threads(saved);
  CHECK(r1.radius_profile == r4.radius_profile);
}
