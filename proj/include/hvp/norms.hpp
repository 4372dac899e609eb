#pragma once

#include <cstdint>
#include <vector>

#include "hvp/field.hpp"

namespace hvp {

double unit_ball_volume(double b);
double unit_sphere_area(int d);

struct BallConstant {
  double a = 0.0, b = 0.0, value = 0.0;
};

// inf_R (1+R)^a / (omega_b R^b) = a^a (a-b)^(b-a) / (omega_b b^b).
BallConstant ball_constant(double a, double b);

// Offsets o with sum (o_i h_i)^2 <= R^2 (1 + kBallSlack) belong to the ball.
inline constexpr double kBallSlack = 1e-12;

// Dilation by the discrete Euclidean ball of radius R, values outside the
// box treated as 0, result restricted to the box.
RealField local_sup(const RealField& f, double R);

// Same dilation on the box padded by ceil(R/h) layers per side, the domain
// the A-norm integrates over.
RealField local_sup_padded(const RealField& f, double R);

// {0} U {cell diagonal * 2^(j/2)} up to max_radius (default: half box diagonal).
std::vector<double> default_radius_set(const Lattice& l, double max_radius = -1.0);

// Bytes the padded dilation for radius R needs on lattice l.
std::uint64_t dilation_bytes(const Lattice& l, double R);

// Drops radii whose dilation would exceed the byte budget (0 always kept).
std::vector<double> fit_radius_set(const Lattice& l, std::vector<double> radii, std::uint64_t budget);

struct NormReport {
  double a_norm = 0.0;
  double b_norm = 0.0;
  std::vector<double> per_derivative;
  double argmax_radius = 0.0;
  std::vector<double> radius_set;
  std::vector<double> radius_profile;  // weighted value per radius
};

// sup_R (1+R)^(-kappa/p) ( int sup_{|zb|<=R} |f(z+zb)|^p dz )^(1/p)
NormReport a_norm(const RealField& f, double kappa, double p, const std::vector<double>& radius_set);

template <class S>
NormReport a_norm(const GridField<S>& f, double kappa, double p, const std::vector<double>& radius_set) {
  if constexpr (std::is_same_v<S, double>) {
    RealField m = f;
    m.values = m.values.cwiseAbs();
    return a_norm(m, kappa, p, radius_set);
  } else {
    return a_norm(modulus(f), kappa, p, radius_set);
  }
}

// (sum_{|beta|<=1} a_norm(d^beta f)^p)^(1/p) with p = 2 by default.
template <class S>
NormReport b_norm(const GridField<S>& f, const std::vector<GridField<S>>& gradient, double kappa,
                  const std::vector<double>& radius_set, double p = 2.0) {
  NormReport r = a_norm(f, kappa, p, radius_set);
  double s = std::pow(r.a_norm, p);
  for (const auto& g : gradient) {
    const double a = a_norm(g, kappa, p, radius_set).a_norm;
    r.per_derivative.push_back(a);
    s += std::pow(a, p);
  }
  r.b_norm = std::pow(s, 1.0 / p);
  return r;
}

}  // namespace hvp
