#pragma once

#include <vector>

#include "hvp/solver.hpp"

namespace hvp {

// Classical Vlasov-Poisson on f >= 0 with the same flow and convolution code.
struct DensityTrajectory {
  PhaseGrid grid;
  std::vector<double> times;
  std::vector<RealField> f;
  std::vector<SpatialField> rho;
  std::vector<SpatialVectorField> force;
  double clipped_mass = 0.0;  // total mass removed by clipping undershoot
  double mass_drift = 0.0;    // max relative drift of int f
};

SpatialField density_of(const RealField& f);

// f(t+dt, z) = f(t, Z(t, t+dt, z)), negative undershoot clipped to 0.
RealField vlasov_step(const RealField& f, const Convolver& conv, double dt, StepMode mode, int substeps,
                      double* clipped = nullptr);
RealField vlasov_step(const RealField& f, const InteractionKernel& kernel, double dt, StepMode mode, int substeps = 4);

// Keeps fields with the same cadence as run(), so times line up.
DensityTrajectory run_vlasov(const RealField& f0, const Convolver& conv, const SolverConfig& config);

struct GapRow {
  double t = 0.0;
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
  double rel_l1 = 0.0, rel_l2 = 0.0, rel_linf = 0.0;
};

// Gaps between |alpha(t)|^2 and f(t), relative to the norms of f(t).
std::vector<GapRow> compare(const Trajectory& alpha, const DensityTrajectory& f);

}  // namespace hvp
