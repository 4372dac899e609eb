#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hvp/field.hpp"

namespace hvp::test {

// inf over R of (1+R)^a / (omega_b R^b) by golden section in log R; the
// objective is convex in log R.
inline double numeric_ball_constant(double a, double b, double* argmin = nullptr) {
  auto g = [&](double u) { return a * std::log1p(std::exp(u)) - b * u; };
  double lo = -12, hi = 12;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 300; ++it) {
    const double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    if (g(m1) < g(m2))
      hi = m2;
    else
      lo = m1;
  }
  const double u = 0.5 * (lo + hi);
  if (argmin) *argmin = std::exp(u);
  const double omega = std::pow(std::numbers::pi, b / 2) / std::tgamma(b / 2 + 1);
  return std::exp(g(u)) / omega;
}

// Compactly supported (1 - r^2/a^2)^2 bump.
inline SpatialField blob(const Lattice& l, double radius, const double* centre = nullptr) {
  SpatialField f(l);
  int idx[kMaxDim];
  for (std::size_t i = 0; i < f.size(); ++i) {
    l.unravel(i, idx);
    double r2 = 0.0;
    for (int a = 0; a < l.dim(); ++a) r2 += std::pow(l.coord(a, idx[a]) - (centre ? centre[a] : 0.0), 2);
    const double s = r2 / (radius * radius);
    f[i] = s < 1.0 ? (1.0 - s) * (1.0 - s) : 0.0;
  }
  return f;
}

inline double max_rel(const SpatialVectorField& a, const SpatialVectorField& b) {
  double num = 0.0, den = 0.0;
  for (int k = 0; k < a.components(); ++k) {
    num = std::max(num, (a.comp[k] - b.comp[k]).cwiseAbs().maxCoeff());
    den = std::max(den, b.comp[k].cwiseAbs().maxCoeff());
  }
  return num / den;
}

// Smooth, bounded, time-dependent vector field on R^3: sum of Gaussian bumps
// with random constant directions.
struct RandomForce {
  struct Term {
    double c[3], dir[3], w, freq;
  };
  std::vector<Term> terms;

  explicit RandomForce(std::uint64_t seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int j = 0; j < 3; ++j) {
      Term t;
      for (int a = 0; a < 3; ++a) {
        t.c[a] = 1.5 * u(rng);
        t.dir[a] = amp * u(rng);
      }
      t.w = 0.8 + 0.5 * u(rng);
      t.freq = 2.0 * u(rng);
      terms.push_back(t);
    }
  }

  void operator()(double tau, const double* x, double* F) const {
    F[0] = F[1] = F[2] = 0.0;
    for (const auto& t : terms) {
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) r2 += (x[a] - t.c[a]) * (x[a] - t.c[a]);
      const double g = std::exp(-r2 / (2 * t.w * t.w)) * (1.0 + 0.3 * std::sin(t.freq * tau));
      for (int a = 0; a < 3; ++a) F[a] += g * t.dir[a];
    }
  }
};

}  // namespace hvp::test
