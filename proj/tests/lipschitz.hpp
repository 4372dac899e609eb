#pragma once

#include <array>
#include <random>
#include <utility>

#include "hvp/chartuple.hpp"
#include "hvp/norms.hpp"
#include "corpus.hpp"

namespace hvp::test {

// Left and right sides of the six tuple-difference estimates. The right
// sides of (iii) and (vi) omit the unknown kernel constant.
struct LipschitzRow {
  std::array<double, 6> lhs{}, rhs{};
};

inline RealField gradient_v_magnitude(const WaveField& a) {
  RealField m(a.lattice);
  for (const auto& g : gradient(a, Axes::V)) m.values += g.values.cwiseAbs2();
  m.values = m.values.cwiseSqrt();
  return m;
}

inline LipschitzRow lipschitz_row(const WaveField& a1, const WaveField& a2, const Convolver& conv, double kappa,
                                  const std::vector<double>& radii) {
  const int d = a1.lattice.dim() / 2;
  const auto t1 = characteristic_tuple(a1, conv), t2 = characteristic_tuple(a2, conv);
  const double A1 = a_norm(a1, kappa, 2.0, radii).a_norm, A2 = a_norm(a2, kappa, 2.0, radii).a_norm;
  const double A12 = a_norm(a1 - a2, kappa, 2.0, radii).a_norm;
  const double G1 = a_norm(gradient_v_magnitude(a1), kappa, 2.0, radii).a_norm;
  const double G2 = a_norm(gradient_v_magnitude(a2), kappa, 2.0, radii).a_norm;
  const double c = ball_constant(kappa, d).value;
  const double cf = std::pow(c, 1.0 - 1.0 / d);
  LipschitzRow r;
  const SpatialField drho = t1.rho - t2.rho;
  r.lhs = {sup_norm(drho), lp_norm(drho, 1.0), sup_norm(t1.force - t2.force),
           sup_norm(t1.phase_density - t2.phase_density), lp_norm(t1.phase_density - t2.phase_density, 1.0),
           sup_norm(t1.phase_force - t2.phase_force)};
  r.rhs = {c * (A1 + A2) * A12, (A1 + A2) * A12, cf * (A1 + A2) * A12,
           c * (G1 + G2) * A12, (G1 + G2) * A12, cf * (G1 + G2) * A12};
  return r;
}

// Field pair (a, a (1 + eps b)) with b a real smooth bump field scaled to
// max |b| = 1 and eps in [0.05, 0.5].
inline std::pair<WaveField, WaveField> perturbed_pair(const Lattice& phase, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double eps = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
  const WaveField a = random_smooth(phase, seed);
  RealField b = random_smooth_real(phase, seed + 7919);
  b.values /= b.values.cwiseAbs().maxCoeff();
  WaveField a2 = a;
  a2.values = a.values.cwiseProduct((1.0 + eps * b.values.array()).matrix().cast<cplx>());
  return {a, a2};
}

// Radius set for the tuple estimates: the default set plus the optimal
// radius d/(kappa-d) of the ball constant.
inline std::vector<double> lipschitz_radii(const Lattice& phase, double kappa, std::uint64_t budget) {
  const int d = phase.dim() / 2;
  auto r = default_radius_set(phase, 1.5 * d / (kappa - d));
  r.push_back(d / (kappa - d));
  return fit_radius_set(phase, r, budget);
}

}  // namespace hvp::test
