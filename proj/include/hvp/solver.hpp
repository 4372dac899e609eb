#pragma once

#include <string>
#include <vector>

#include "hvp/chartuple.hpp"
#include "hvp/flow.hpp"
#include "hvp/interaction.hpp"

namespace hvp {

enum class StepMode { Frozen, Pc1 };

StepMode parse_step_mode(const std::string& s);
std::string to_string(StepMode m);

struct SolverConfig {
  double dt = 0.05;
  double t_end = 0.5;
  int substeps = 4;
  StepMode mode = StepMode::Pc1;
  int picard_n_max = 8;
  double picard_tol = 1e-10;
  double kappa = 6.0;
  std::vector<double> radius_set{0.0};
  // BlowUp when ||alpha||_2 exceeds norm_guard times its initial value.
  double norm_guard = 10.0;
  // Accepted-run budget for the ||alpha||_2 drift.
  double l2_tolerance = 0.01;
  // Keep every n-th field in the trajectory (0: first and last only).
  int keep_every = 0;
  // Extra constant imaginary phase rate i*c added to K (gauge experiment).
  double gauge_c = 0.0;
  // Per-step diagnostics (a_norm, energies); off for bare stepping.
  bool diagnostics = true;

  int steps() const;
  void validate() const;
};

// One row of the per-step time series.
struct StepRow {
  double t = 0.0;
  double l2 = 0.0, sup = 0.0, a_norm = 0.0;
  double rho_sup = 0.0, force_sup = 0.0;
  double re_k_max = 0.0, k_max = 0.0;
  double H = 0.0, H_vl = 0.0, M2 = 0.0;
};

struct Trajectory {
  PhaseGrid grid;
  std::vector<double> times;        // times of the kept fields
  std::vector<WaveField> fields;
  std::vector<StepRow> rows;        // every step
  std::string provenance;           // "transport" or "picard(n)"
  double l2_drift = 0.0;            // max relative ||alpha||_2 drift
};

struct StepResult {
  WaveField alpha;
  CharacteristicTuple tuple;  // tuple of the input field
};

// Semi-Lagrangian update over [t, t+dt] (the step is autonomous in t):
// backward characteristics from t+dt, alpha_t at the foot, times
// exp(trapezoidal int K + i gauge_c dt).
StepResult transport_step(const WaveField& alpha, const Convolver& conv, double dt, StepMode mode, int substeps,
                          double gauge_c = 0.0);
WaveField transport_step(const WaveField& alpha, const InteractionKernel& kernel, double dt, StepMode mode,
                         int substeps = 4);

// Pulls `source` back along the characteristics of `sampler` from time t to
// time s: out(z) = source(Z(s,t,z)) exp(int_s^t K + i c (t-s)).
WaveField pull_back(const WaveField& source, const ForceSampler& sampler, double s, double t, int substeps,
                    double gauge_c = 0.0);

struct RunResult {
  Trajectory trajectory;
  bool ok = true;
  std::string message;  // failure reason when !ok
  bool accepted = true;  // ok and l2_drift <= l2_tolerance
};

RunResult run(const WaveField& alpha0, const Convolver& conv, const SolverConfig& config);

struct PicardLog {
  std::vector<double> distance;  // d_n = sup_j a_norm(alpha_{n+1}(t_j) - alpha_n(t_j))
  int iterations = 0;
  bool converged = false;
};

struct PicardResult {
  Trajectory trajectory;
  PicardLog log;
};

// Fixed-point iteration on the whole sampled trajectory. Throws
// NoContraction when d_n >= d_{n-1} for some n >= 3.
PicardResult picard_solve(const WaveField& alpha0, const Convolver& conv, const SolverConfig& config);

std::vector<double> solution_distance(const Trajectory& a, const Trajectory& b, double kappa,
                                      const std::vector<double>& radius_set);

// Sup over interior nodes (margin cells from every face) of
// |(a1 - a0)/dt + (L a0 + L a1)/2| with L a = v.grad_x a + F.grad_v a - K a.
double pde_residual(const WaveField& a0, const WaveField& a1, double dt, const Convolver& conv, int margin);

}  // namespace hvp
