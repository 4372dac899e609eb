#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "hvp/field.hpp"

namespace hvp {

enum class KernelKind { Newtonian, Mollified, Zero };
enum class ConvMethod { Direct, Fft };

KernelKind parse_kernel_kind(const std::string& s);
std::string to_string(KernelKind k);
ConvMethod parse_conv_method(const std::string& s);
std::string to_string(ConvMethod m);

// Gamma(x) = -coupling / ((d-2) |S^{d-1}| |x|^{d-2}); the force -grad Gamma * rho
// is attractive for coupling > 0 and reproduces -grad(-1/(4 pi |x|)) * rho in d = 3.
// The mollified kernel is the potential of a uniform ball of radius epsilon.
struct InteractionKernel {
  KernelKind kind = KernelKind::Newtonian;
  int d = 3;
  double coupling = 1.0;
  double epsilon = 0.0;
};

InteractionKernel make_kernel(KernelKind kind, int d, double coupling = 1.0, double epsilon = 0.0);

// grad Gamma at x; throws SingularPoint at x = 0 for the pure kernel.
Eigen::VectorXd kernel_gradient(const InteractionKernel& k, const double* x);
inline Eigen::VectorXd kernel_gradient(const InteractionKernel& k, const Eigen::VectorXd& x) {
  return kernel_gradient(k, x.data());
}
double kernel_potential(const InteractionKernel& k, const double* x);
Eigen::MatrixXd kernel_hessian(const InteractionKernel& k, const double* x);

// Sampled kernel tables for one x-lattice, applied either by direct sums or
// by zero-padded FFT (2n per axis). Immutable after construction.
class Convolver {
public:
  Convolver(const Lattice& x, const InteractionKernel& kernel, ConvMethod method = ConvMethod::Fft);
  ~Convolver();
  Convolver(const Convolver&) = delete;
  Convolver& operator=(const Convolver&) = delete;

  const Lattice& lattice() const { return lattice_; }
  const InteractionKernel& kernel() const { return kernel_; }
  ConvMethod method() const { return method_; }

  // F = -grad Gamma * rho
  SpatialVectorField force(const SpatialField& rho) const;
  // K = -grad Gamma .* phi
  ComplexSpatialField phase_force(const SpatialComplexVectorField& phi) const;
  // Gamma * rho, self cell uses the cell average of Gamma
  SpatialField potential(const SpatialField& rho) const;

  // Table entry -vol * grad_k Gamma(o h) at offset o (o = target - source).
  double force_table(int k, const int* offset) const;

  struct Impl;

private:
  Lattice lattice_;
  InteractionKernel kernel_;
  ConvMethod method_;
  std::unique_ptr<Impl> impl_;
};

SpatialVectorField convolve_gradient_direct(const SpatialField& rho, const InteractionKernel& k);
ComplexSpatialField convolve_gradient_direct(const SpatialComplexVectorField& phi, const InteractionKernel& k);
SpatialVectorField convolve_gradient_fft(const SpatialField& rho, const InteractionKernel& k);
ComplexSpatialField convolve_gradient_fft(const SpatialComplexVectorField& phi, const InteractionKernel& k);

struct HessianPatch {
  std::vector<std::size_t> nodes;
  std::vector<Eigen::MatrixXd> hessian;
};

// Second derivatives of U = Gamma * rho at the nodes within min(patch, R/2)
// of node x0: far-field sum outside B(x0,R), compensated near-field sum
// inside, and the boundary term over the sphere.
HessianPatch hessian_potential(const SpatialField& rho, const InteractionKernel& k, const std::vector<int>& x0,
                               double R, double patch = 0.0);

}  // namespace hvp
