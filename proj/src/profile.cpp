#include "hvp/profile.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hvp {

ProfileKind parse_profile_kind(const std::string& s) {
  if (s == "zero") return ProfileKind::Zero;
  if (s == "gaussian") return ProfileKind::Gaussian;
  if (s == "ball") return ProfileKind::Ball;
  throw Error(ErrorKind::ValidationError, "unknown profile kind '" + s + "'");
}

std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Zero: return "zero";
    case ProfileKind::Gaussian: return "gaussian";
    case ProfileKind::Ball: return "ball";
  }
  return "zero";
}

namespace {

double at(const std::vector<double>& v, int i) { return v.empty() ? 0.0 : v[static_cast<std::size_t>(i)]; }

double amplitude_of(const AnalyticProfile& p, int d) {
  if (p.kind == ProfileKind::Gaussian && p.normalize) {
    AnalyticProfile unit = p;
    unit.amplitude = 1.0;
    return std::sqrt(p.mass / gaussian_mass(unit, d));
  }
  return p.amplitude;
}

cplx evaluate_unit(const AnalyticProfile& p, int d, const double* x, const double* v) {
  double g = 0.0;
  if (p.kind == ProfileKind::Gaussian) {
    double ex = 0.0;
    for (int i = 0; i < d; ++i) {
      const double dx = x[i] - at(p.x0, i), dv = v[i] - at(p.v0, i);
      ex += dx * dx / (4 * p.sigma_x * p.sigma_x) + dv * dv / (4 * p.sigma_v * p.sigma_v);
    }
    g = std::exp(-ex);
  } else if (p.kind == ProfileKind::Ball) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double dx = x[i] - at(p.x0, i), dv = v[i] - at(p.v0, i);
      r2 += dx * dx + dv * dv;
    }
    g = 0.5 * (1.0 - std::tanh((std::sqrt(r2) - p.radius) / p.width));
  } else {
    return 0.0;
  }
  double phase = 0.0;
  for (int i = 0; i < d; ++i) phase += at(p.k, i) * v[i] + at(p.q, i) * x[i] + p.chirp * x[i] * v[i];
  return g * std::polar(1.0, phase);
}

}  // namespace

double gaussian_mass(const AnalyticProfile& p, int d) {
  const double two_pi = 2.0 * std::numbers::pi;
  return p.amplitude * p.amplitude * std::pow(two_pi * p.sigma_x * p.sigma_x, 0.5 * d) *
         std::pow(two_pi * p.sigma_v * p.sigma_v, 0.5 * d);
}

cplx evaluate(const AnalyticProfile& p, int d, const double* x, const double* v) {
  if (p.kind == ProfileKind::Zero) return 0.0;
  return amplitude_of(p, d) * evaluate_unit(p, d, x, v);
}

WaveField sample(const PhaseGrid& grid, const AnalyticProfile& p) {
  WaveField f(grid.phase);
  if (p.kind == ProfileKind::Zero) return f;
  const int d = grid.d;
  const double amp = amplitude_of(p, d);
  parallel_for(f.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    grid.phase.unravel(i, idx);
    double x[kMaxDim], v[kMaxDim];
    for (int a = 0; a < d; ++a) {
      x[a] = grid.phase.coord(a, idx[a]);
      v[a] = grid.phase.coord(d + a, idx[d + a]);
    }
    f[i] = amp * evaluate_unit(p, d, x, v);
  });
  if (p.noise != 0.0) {
    // Noise is drawn serially in index order so it is schedule independent.
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= 1.0 + p.noise * u(rng);
  }
  return f;
}

}  // namespace hvp
