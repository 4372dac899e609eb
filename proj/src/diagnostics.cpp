#include "hvp/diagnostics.hpp"

#include <cmath>

#include "hvp/norms.hpp"

namespace hvp {

namespace {

template <class Weight>
MomentReport moment_impl(const Lattice& phase, double k, Weight&& density) {
  if (!(k >= 0.0)) throw Error(ErrorKind::DomainError, "moment order must be nonnegative");
  const PhaseGrid g = split_phase(phase);
  MomentReport r;
  r.k = k;
  r.m = SpatialField(g.x);
  const std::size_t nv = g.nv_total();
  std::vector<double> vk(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    int idx[kMaxDim];
    g.v.unravel(j, idx);
    double s = 0.0;
    for (int a = 0; a < g.d; ++a) s += g.v.coord(a, idx[a]) * g.v.coord(a, idx[a]);
    vk[j] = k == 0.0 ? 1.0 : std::pow(s, 0.5 * k);
  }
  const double wv = g.v.cell_volume();
  parallel_for(g.nx_total(), [&](std::size_t ix) {
    r.m[ix] = wv * serial_pairwise_sum<double>(nv, [&](std::size_t j) { return vk[j] * density(ix * nv + j); });
  });
  r.M = integral(r.m);
  return r;
}

double sup_real(const ComplexSpatialField& K) {
  return parallel_max(K.size(), [&](std::size_t i) { return std::abs(K[i].real()); });
}

}  // namespace

MomentReport velocity_moment(const WaveField& alpha, double k) {
  return moment_impl(alpha.lattice, k, [&](std::size_t i) { return std::norm(alpha[i]); });
}

MomentReport velocity_moment(const RealField& f, double k) {
  return moment_impl(f.lattice, k, [&](std::size_t i) { return f[i]; });
}

double moment_exponent(int d, double k, double l, double p) {
  if (std::isinf(p)) return (k + d) / (l + d);
  const double num = k + d * (p - 1.0) / p;
  const double den = l + (k - l) / p + d * (p - 1.0) / p;
  if (den <= 0.0) throw Error(ErrorKind::DomainError, "moment exponent r is undefined (0/0)");
  return num / den;
}

double moment_constant(int d, double k, double l, double p) {
  if (!(l >= 0.0) || !(k >= l) || !(p >= 1.0)) throw Error(ErrorKind::DomainError, "moment check needs 0 <= l <= k, p >= 1");
  const bool p_inf = std::isinf(p);
  const double d_over_q = p_inf ? d : d * (p - 1.0) / p;
  const double a = l + d_over_q;
  const double b = k - l;
  const double top = k + d_over_q;
  if (top <= 0.0) throw Error(ErrorKind::DomainError, "moment constant is undefined for k = l = 0, p = 1");
  // Limits: x^0 = 1, 0^y = 0 for y > 0, (b/a)^(a/top) -> 1 as a -> 0.
  const double first = a == 0.0 ? 1.0 : b == 0.0 ? 0.0 : std::pow(b / a, a / top);
  const double second = b == 0.0 ? 1.0 : a == 0.0 ? 0.0 : std::pow(a / b, b / top);
  double third = 1.0;
  if (p > 1.0 && b > 0.0) {
    const double q = p_inf ? 1.0 : p / (p - 1.0);
    third = std::pow(unit_sphere_area(d) / (l * q + d), b / (k * q + d));
  }
  return (first + second) * third;
}

MomentCheck moment_inequality_check(const WaveField& alpha, double k, double l, double p) {
  const PhaseGrid g = split_phase(alpha.lattice);
  const int d = g.d;
  MomentCheck c;
  c.constant = moment_constant(d, k, l, p);
  c.r = moment_exponent(d, k, l, p);
  c.lhs = lp_norm(velocity_moment(alpha, l).m, c.r);
  const double Mk = velocity_moment(alpha, k).M;
  const double a2p = lp_norm(alpha, std::isinf(p) ? kInf : 2.0 * p);
  double e1, e2;
  if (std::isinf(p)) {
    e1 = 2.0 * (k - l) / (k + d);
    e2 = (l + d) / (k + d);
  } else {
    e1 = 2.0 * p * (k - l) / (p * k + (p - 1.0) * d);
    e2 = (l * p + d * (p - 1.0)) / (p * k + (p - 1.0) * d);
  }
  c.rhs = c.constant * (e1 == 0.0 ? 1.0 : std::pow(a2p, e1)) * (e2 == 0.0 ? 1.0 : std::pow(Mk, e2));
  c.pass = c.lhs <= c.rhs;
  return c;
}

EnergyReport energy(const WaveField& alpha, const Convolver& conv) {
  return energy(alpha, conv, characteristic_tuple(alpha, conv));
}

EnergyReport energy(const WaveField& alpha, const Convolver& conv, const CharacteristicTuple& t) {
  const PhaseGrid g = split_phase(alpha.lattice);
  const int d = g.d;
  const Lattice& L = alpha.lattice;
  EnergyReport e;
  e.kinetic = 0.5 * velocity_moment(alpha, 2.0).M;
  const SpatialField U = conv.potential(t.rho);
  e.potential = 0.5 * inner(t.rho, U);
  e.H = e.kinetic + e.potential;
  // 1/2 Im int conj(a) v.grad_x a, fused so no gradient field is stored.
  const double streaming = pairwise_sum<double>(L.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    L.unravel(i, idx);
    cplx s{};
    for (int k = 0; k < d; ++k) {
      const std::size_t st = L.stride[k];
      const cplx up = idx[k] + 1 < L.n[k] ? alpha[i + st] : cplx{};
      const cplx dn = idx[k] > 0 ? alpha[i - st] : cplx{};
      s += L.coord(d + k, idx[d + k]) * (up - dn) * (0.5 / L.h[k]);
    }
    return (std::conj(alpha[i]) * s).imag();
  }) * L.cell_volume();
  const double forcing = pairwise_sum<double>(g.nx_total(), [&](std::size_t ix) {
    double s = 0.0;
    for (int k = 0; k < d; ++k)
      s += t.force.comp[k][static_cast<Eigen::Index>(ix)] * t.phase_density.comp[k][static_cast<Eigen::Index>(ix)].imag();
    return s;
  }) * g.x.cell_volume();
  e.H_vl = 0.5 * streaming + 0.5 * forcing;
  return e;
}

EnergyReport energy(const RealField& f, const Convolver& conv) {
  const PhaseGrid g = split_phase(f.lattice);
  EnergyReport e;
  e.kinetic = 0.5 * velocity_moment(f, 2.0).M;
  const SpatialField rho = velocity_moment(f, 0.0).m;
  e.potential = 0.5 * inner(rho, conv.potential(rho));
  e.H = e.kinetic + e.potential;
  return e;
}

double symplectic_form(const WaveField& a, const WaveField& b) {
  require_same(a.lattice, b.lattice, "symplectic_form");
  return pairwise_sum<double>(a.size(), [&](std::size_t i) { return (a[i] * std::conj(b[i])).imag(); }) *
         a.lattice.cell_volume();
}

StepRow step_row(double t, const WaveField& alpha, const CharacteristicTuple& tuple, const Convolver& conv,
                 const SolverConfig& cfg) {
  StepRow r;
  r.t = t;
  r.l2 = lp_norm(alpha, 2.0);
  r.sup = sup_norm(alpha);
  r.a_norm = a_norm(alpha, cfg.kappa, 2.0, cfg.radius_set).a_norm;
  r.rho_sup = sup_norm(tuple.rho);
  r.force_sup = sup_norm(tuple.force);
  r.re_k_max = sup_real(tuple.phase_force);
  r.k_max = sup_norm(tuple.phase_force);
  const EnergyReport e = energy(alpha, conv, tuple);
  r.H = e.H;
  r.H_vl = e.H_vl;
  r.M2 = velocity_moment(alpha, 2.0).M;
  return r;
}

AdmissibleRanges admissible_ranges(int d, double kappa) {
  AdmissibleRanges a;
  a.p_lo = d * (1.0 - 1.0 / kappa);
  a.p_hi = d;
  a.k_min = ((1.0 - 1.0 / kappa) * d - 1.0) * d;
  return a;
}

GlobalityMonitor globality_monitor(const Trajectory& traj, const Convolver& conv, const std::vector<double>& p_list,
                                   const std::vector<double>& k_list, double kappa) {
  GlobalityMonitor m;
  m.times = traj.times;
  m.p_list = p_list;
  m.k_list = k_list;
  m.ranges = admissible_ranges(traj.grid.d, kappa);
  for (double p : p_list) m.p_admissible.push_back(p >= m.ranges.p_lo && p < m.ranges.p_hi);
  for (double k : k_list) m.k_admissible.push_back(k >= m.ranges.k_min);
  m.rho_p.assign(p_list.size(), {});
  m.moment.assign(k_list.size(), {});
  for (const WaveField& a : traj.fields) {
    const CharacteristicTuple t = characteristic_tuple(a, conv);
    m.force_sup.push_back(sup_norm(t.force));
    for (std::size_t i = 0; i < p_list.size(); ++i) m.rho_p[i].push_back(lp_norm(t.rho, p_list[i]));
    for (std::size_t i = 0; i < k_list.size(); ++i) m.moment[i].push_back(velocity_moment(a, k_list[i]).M);
  }
  auto growth = [](const std::vector<double>& s) {
    if (s.empty() || s.front() == 0.0) return 0.0;
    double mx = s.front();
    for (double x : s) mx = std::max(mx, x);
    return mx / s.front();
  };
  m.force_growth = growth(m.force_sup);
  for (const auto& s : m.rho_p) m.rho_growth.push_back(growth(s));
  for (const auto& s : m.moment) m.moment_growth.push_back(growth(s));
  return m;
}

GaugeResult gauge_shift(const WaveField& alpha0, const Convolver& conv, SolverConfig cfg, double c, double threshold) {
  GaugeResult g;
  cfg.gauge_c = 0.0;
  g.plain = run(alpha0, conv, cfg);
  cfg.gauge_c = c;
  g.shifted = run(alpha0, conv, cfg);
  const auto& A = g.plain.trajectory.fields;
  const auto& B = g.shifted.trajectory.fields;
  if (A.size() != B.size()) throw Error(ErrorKind::GridMismatch, "gauge runs kept different field counts");
  for (std::size_t j = 0; j < A.size(); ++j) {
    const WaveField& a = A[j];
    const WaveField& b = B[j];
    g.modulus_gap = std::max(g.modulus_gap, parallel_max(a.size(), [&](std::size_t i) {
      return std::abs(std::norm(b[i]) - std::norm(a[i]));
    }));
    std::size_t peak = 0;
    for (std::size_t i = 1; i < a.size(); ++i)
      if (std::abs(a[i]) > std::abs(a[peak])) peak = i;
    if (!(std::abs(a[peak]) > threshold)) continue;
    const cplx ref = b[peak] / a[peak];
    g.phase_constancy = std::max(g.phase_constancy, parallel_max(a.size(), [&](std::size_t i) {
      return std::abs(a[i]) > threshold ? std::abs(b[i] / a[i] - ref) : 0.0;
    }));
    g.modulus_error = std::max(g.modulus_error, std::abs(std::abs(ref) - 1.0));
    const double t = g.plain.trajectory.times[j];
    if (j + 1 == A.size() && t > 0.0) g.measured_rate = std::arg(ref) / t;
  }
  return g;
}

}  // namespace hvp
