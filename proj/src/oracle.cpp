#include "hvp/oracle.hpp"

#include <cmath>

#include "hvp/diagnostics.hpp"

namespace hvp {

SpatialField density_of(const RealField& f) {
  const PhaseGrid g = split_phase(f.lattice);
  SpatialField rho(g.x);
  const std::size_t nv = g.nv_total();
  const double w = g.v.cell_volume();
  parallel_for(g.nx_total(), [&](std::size_t ix) {
    const double* a = f.values.data() + ix * nv;
    rho[ix] = w * serial_pairwise_sum<double>(nv, [&](std::size_t j) { return a[j]; });
  });
  return rho;
}

namespace {

RealField pull_back_density(const RealField& f, const ForceSampler& sampler, double dt, int substeps) {
  const Lattice& L = f.lattice;
  const int d = L.dim() / 2;
  RealField out(L);
  parallel_for_checked(out.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    L.unravel(i, idx);
    double x[6], v[6];
    for (int a = 0; a < d; ++a) {
      x[a] = L.coord(a, idx[a]);
      v[a] = L.coord(d + a, idx[d + a]);
    }
    const Characteristic c = trace(sampler, 0.0, dt, x, v, substeps);
    double z[12];
    for (int a = 0; a < d; ++a) {
      z[a] = c.x[a];
      z[d + a] = c.v[a];
    }
    out[i] = make_stencil(L, z).apply(f.values);
  });
  if (!all_finite(out)) throw Error(ErrorKind::NonFinite, "transported density is not finite");
  return out;
}

double clip(RealField& f) {
  const double removed = pairwise_sum<double>(f.size(), [&](std::size_t i) { return f[i] < 0.0 ? -f[i] : 0.0; });
  parallel_for(f.size(), [&](std::size_t i) {
    if (f[i] < 0.0) f[i] = 0.0;
  });
  return removed * f.lattice.cell_volume();
}

}  // namespace

RealField vlasov_step(const RealField& f, const Convolver& conv, double dt, StepMode mode, int substeps,
                      double* clipped) {
  const SpatialVectorField F0 = conv.force(density_of(f));
  RealField next = pull_back_density(f, ForceSampler({0.0}, {F0}), dt, substeps);
  double removed = clip(next);
  if (mode == StepMode::Pc1) {
    const SpatialVectorField F1 = conv.force(density_of(next));
    next = pull_back_density(f, ForceSampler({0.0, dt}, {F0, F1}), dt, substeps);
    removed = clip(next);
  }
  if (clipped) *clipped += removed;
  return next;
}

RealField vlasov_step(const RealField& f, const InteractionKernel& kernel, double dt, StepMode mode, int substeps) {
  const Convolver conv(split_phase(f.lattice).x, kernel);
  return vlasov_step(f, conv, dt, mode, substeps);
}

DensityTrajectory run_vlasov(const RealField& f0, const Convolver& conv, const SolverConfig& cfg) {
  cfg.validate();
  DensityTrajectory tr;
  tr.grid = split_phase(f0.lattice);
  const double m0 = integral(f0);
  auto keep = [&](double t, const RealField& f) {
    tr.times.push_back(t);
    tr.f.push_back(f);
    tr.rho.push_back(density_of(f));
    tr.force.push_back(conv.force(tr.rho.back()));
  };
  keep(0.0, f0);
  RealField f = f0;
  const int steps = cfg.steps();
  for (int n = 0; n < steps; ++n) {
    f = vlasov_step(f, conv, cfg.dt, cfg.mode, cfg.substeps, &tr.clipped_mass);
    if (m0 > 0.0) tr.mass_drift = std::max(tr.mass_drift, std::abs(integral(f) / m0 - 1.0));
    if (n + 1 == steps || (cfg.keep_every > 0 && (n + 1) % cfg.keep_every == 0)) keep((n + 1) * cfg.dt, f);
  }
  return tr;
}

std::vector<GapRow> compare(const Trajectory& alpha, const DensityTrajectory& f) {
  if (alpha.grid != f.grid) throw Error(ErrorKind::GridMismatch, "compare: grids differ");
  if (alpha.times.size() != f.times.size()) throw Error(ErrorKind::GridMismatch, "compare: sample times differ");
  std::vector<GapRow> rows;
  for (std::size_t j = 0; j < f.times.size(); ++j) {
    if (std::abs(alpha.times[j] - f.times[j]) > 1e-12 * (1.0 + f.times[j]))
      throw Error(ErrorKind::GridMismatch, "compare: sample times differ");
    const RealField gap = modulus_squared(alpha.fields[j]) - f.f[j];
    GapRow r;
    r.t = f.times[j];
    r.l1 = lp_norm(gap, 1.0);
    r.l2 = lp_norm(gap, 2.0);
    r.linf = lp_norm(gap, kInf);
    const double n1 = lp_norm(f.f[j], 1.0), n2 = lp_norm(f.f[j], 2.0), ni = lp_norm(f.f[j], kInf);
    r.rel_l1 = n1 > 0.0 ? r.l1 / n1 : r.l1;
    r.rel_l2 = n2 > 0.0 ? r.l2 / n2 : r.l2;
    r.rel_linf = ni > 0.0 ? r.linf / ni : r.linf;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace hvp
