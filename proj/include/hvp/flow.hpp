#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "hvp/field.hpp"
#include "hvp/interpolate.hpp"

namespace hvp {

// Force (and optionally phase force K) as a function of (t, x): either
// fields sampled at increasing times on the x-lattice, linear in time and
// multilinear in space, or an injected analytic function.
class ForceSampler {
public:
  using Analytic = std::function<void(double t, const double* x, double* F)>;

  ForceSampler(std::vector<double> times, std::vector<SpatialVectorField> force,
               std::vector<ComplexSpatialField> phase_force = {});
  ForceSampler(int d, Analytic f, double t0, double t1);
  static ForceSampler zero(int d, double t0, double t1);

  int d() const { return d_; }
  double t_min() const { return times_.front(); }
  double t_max() const { return times_.back(); }
  bool has_phase_force() const { return !phase_force_.empty(); }
  bool analytic() const { return static_cast<bool>(analytic_); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<SpatialVectorField>& force_samples() const { return force_; }

  void force(double t, const double* x, double* F) const;
  // Force and phase force at the same point with one stencil.
  void sample(double t, const double* x, double* F, cplx* K) const;

private:
  void bracket(double t, int& j, double& w) const;

  int d_ = 0;
  std::vector<double> times_;
  std::vector<SpatialVectorField> force_;
  std::vector<ComplexSpatialField> phase_force_;
  Analytic analytic_;
};

// Result of tracing one characteristic from time t to time s.
struct Characteristic {
  std::array<double, 6> x{}, v{};
  cplx k_integral{};  // trapezoidal int K dtau, oriented from min(s,t) to max(s,t)
};

// Velocity Verlet with `substeps` equal steps from time t to time s
// (backward when s < t). Z(t,t,z) = z without any step.
Characteristic trace(const ForceSampler& sampler, double s, double t, const double* x, const double* v, int substeps,
                     bool integrate_k = false);

struct FlowMap {
  double s = 0.0, t = 0.0;
  Lattice phase;
  std::vector<std::size_t> seeds;
  Eigen::MatrixXd X, V;  // d x seeds
};

FlowMap integrate_flow(const ForceSampler& sampler, double s, double t, const Lattice& phase, int substeps,
                       std::vector<std::size_t> seeds = {});

double flow_difference(const FlowMap& a, const FlowMap& b);

// Suprema over the nodes of `probe` at time tau.
double force_difference_sup(const ForceSampler& a, const ForceSampler& b, double tau, const Lattice& probe);
// sup of the spectral norm of grad_x F, central differences with step eps
// at the nodes of `probe`.
double force_gradient_sup(const ForceSampler& a, double tau, const Lattice& probe, double eps);

// int_s^t ||F - Fb||(tau) exp(int_s^tau (1 + ||grad F||)) dtau, trapezoidal in
// tau with `nodes` points, suprema estimated on `probe`.
double gronwall_envelope(const ForceSampler& F, const ForceSampler& Fb, double s, double t, const Lattice& probe,
                         int nodes, double eps);

// det of the 2d x 2d Jacobian of z -> Z(s,t,z), central differences of step eps.
double flow_jacobian_det(const ForceSampler& sampler, double s, double t, const double* x, const double* v,
                         int substeps, double eps);

}  // namespace hvp
