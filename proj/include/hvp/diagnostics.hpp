#pragma once

#include <vector>

#include "hvp/chartuple.hpp"
#include "hvp/solver.hpp"

namespace hvp {

struct MomentReport {
  double k = 0.0;
  double M = 0.0;
  SpatialField m;
};

// M_k = int int |v|^k |alpha|^2 and the local moment m_k(x).
MomentReport velocity_moment(const WaveField& alpha, double k);
MomentReport velocity_moment(const RealField& f, double k);

struct MomentCheck {
  double r = 0.0;
  double lhs = 0.0, rhs = 0.0, constant = 0.0;
  bool pass = false;
};

double moment_exponent(int d, double k, double l, double p);
double moment_constant(int d, double k, double l, double p);
// ||m_l||_r <= c ||alpha||_{2p}^{2p(k-l)/(pk+(p-1)d)} M_k^{(lp+d(p-1))/(pk+(p-1)d)}
MomentCheck moment_inequality_check(const WaveField& alpha, double k, double l, double p);

struct EnergyReport {
  double kinetic = 0.0, potential = 0.0, H = 0.0, H_vl = 0.0;
};

// H = 1/2 int |v|^2 f + 1/2 int rho (Gamma * rho). H_vl = 1/2 Im int conj(a) v.grad_x a
// + 1/2 int F . Im(phi), the Re/(1/i) form with the solver's centred differences.
EnergyReport energy(const WaveField& alpha, const Convolver& conv);
EnergyReport energy(const WaveField& alpha, const Convolver& conv, const CharacteristicTuple& tuple);
EnergyReport energy(const RealField& f, const Convolver& conv);

// omega(a, b) = Im int a conj(b)
double symplectic_form(const WaveField& a, const WaveField& b);

StepRow step_row(double t, const WaveField& alpha, const CharacteristicTuple& tuple, const Convolver& conv,
                 const SolverConfig& config);

struct AdmissibleRanges {
  double p_lo = 0.0, p_hi = 0.0;  // p in [p_lo, p_hi)
  double k_min = 0.0;
};

AdmissibleRanges admissible_ranges(int d, double kappa);

struct GlobalityMonitor {
  std::vector<double> times;
  std::vector<double> force_sup;
  std::vector<double> p_list, k_list;
  std::vector<std::vector<double>> rho_p;   // [p][time]
  std::vector<std::vector<double>> moment;  // [k][time]
  std::vector<bool> p_admissible, k_admissible;
  AdmissibleRanges ranges;
  // max over the series divided by its first value, per monitored quantity
  double force_growth = 0.0;
  std::vector<double> rho_growth, moment_growth;
};

GlobalityMonitor globality_monitor(const Trajectory& traj, const Convolver& conv, const std::vector<double>& p_list,
                                   const std::vector<double>& k_list, double kappa);

struct GaugeResult {
  RunResult plain, shifted;
  double modulus_gap = 0.0;     // max | |a_c|^2 - |a_0|^2 | over kept fields
  double phase_constancy = 0.0; // max |ratio - reference ratio| where |a_0| > threshold
  double modulus_error = 0.0;   // | |reference ratio| - 1 |
  double measured_rate = 0.0;   // arg(ratio)/t at the final time
};

GaugeResult gauge_shift(const WaveField& alpha0, const Convolver& conv, SolverConfig config, double c,
                        double threshold = 1e-6);

}  // namespace hvp
