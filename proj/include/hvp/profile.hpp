#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hvp/field.hpp"

namespace hvp {

enum class ProfileKind { Zero, Gaussian, Ball };

// alpha(x, v) = amplitude * g(x, v) * exp(i (k.v + q.x + chirp x.v)).
// Gaussian: g = exp(-|x-x0|^2/(4 sx^2) - |v-v0|^2/(4 sv^2)), so |alpha|^2 has
// standard deviations sx, sv. Ball: g = (1 - tanh((|z-z0| - radius)/width))/2
// with z = (x, v). With normalize set, amplitude is chosen so that the
// analytic L2 mass (Gaussian) equals `mass`.
struct AnalyticProfile {
  ProfileKind kind = ProfileKind::Gaussian;
  double amplitude = 1.0;
  bool normalize = true;
  double mass = 1.0;
  std::vector<double> x0, v0, k, q;
  double sigma_x = 0.5, sigma_v = 0.5;
  double chirp = 0.0;
  double radius = 1.0, width = 0.1;
  // Relative multiplicative noise amplitude, drawn from `seed`.
  double noise = 0.0;
  std::uint64_t seed = 0;
};

ProfileKind parse_profile_kind(const std::string& s);
std::string to_string(ProfileKind k);

// Value at one phase-space point (without noise).
cplx evaluate(const AnalyticProfile& p, int d, const double* x, const double* v);

WaveField sample(const PhaseGrid& grid, const AnalyticProfile& profile);

// Analytic ||alpha||_2^2 of the noise-free Gaussian profile.
double gaussian_mass(const AnalyticProfile& p, int d);

}  // namespace hvp
