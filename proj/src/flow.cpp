#include "hvp/flow.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace hvp {

ForceSampler::ForceSampler(std::vector<double> times, std::vector<SpatialVectorField> force,
                           std::vector<ComplexSpatialField> phase_force)
    : times_(std::move(times)), force_(std::move(force)), phase_force_(std::move(phase_force)) {
  if (times_.empty() || times_.size() != force_.size())
    throw Error(ErrorKind::DomainError, "force sampler needs one field per sample time");
  if (!phase_force_.empty() && phase_force_.size() != times_.size())
    throw Error(ErrorKind::DomainError, "phase force samples must match sample times");
  for (std::size_t j = 1; j < times_.size(); ++j)
    if (!(times_[j] > times_[j - 1])) throw Error(ErrorKind::DomainError, "sample times must increase strictly");
  d_ = force_.front().lattice.dim();
  for (const auto& f : force_)
    for (const auto& c : f.comp)
      if (!c.allFinite()) throw Error(ErrorKind::NonFiniteForce, "sampled force is not finite");
}

ForceSampler::ForceSampler(int d, Analytic f, double t0, double t1) : d_(d), times_{t0, t1}, analytic_(std::move(f)) {
  if (!(t1 > t0)) times_ = {t0};
}

ForceSampler ForceSampler::zero(int d, double t0, double t1) {
  return ForceSampler(
      d, [d](double, const double*, double* F) { std::fill(F, F + d, 0.0); }, t0, t1);
}

void ForceSampler::bracket(double t, int& j, double& w) const {
  const int m = static_cast<int>(times_.size());
  if (m == 1 || t <= times_.front()) {
    j = 0;
    w = 0.0;
    return;
  }
  if (t >= times_.back()) {
    j = m - 1;
    w = 0.0;
    return;
  }
  j = static_cast<int>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin()) - 1;
  w = (t - times_[j]) / (times_[j + 1] - times_[j]);
}

void ForceSampler::force(double t, const double* x, double* F) const { sample(t, x, F, nullptr); }

void ForceSampler::sample(double t, const double* x, double* F, cplx* K) const {
  if (analytic_) {
    analytic_(t, x, F);
    if (K) *K = 0.0;
  } else {
    int j;
    double w;
    bracket(t, j, w);
    const Stencil st = make_stencil(force_[j].lattice, x);
    for (int k = 0; k < d_; ++k) F[k] = st.apply(force_[j].comp[k]);
    if (K) *K = has_phase_force() ? st.apply(phase_force_[j].values) : cplx{};
    if (w != 0.0) {
      for (int k = 0; k < d_; ++k) F[k] = (1.0 - w) * F[k] + w * st.apply(force_[j + 1].comp[k]);
      if (K && has_phase_force()) *K = (1.0 - w) * *K + w * st.apply(phase_force_[j + 1].values);
    }
  }
  for (int k = 0; k < d_; ++k)
    if (!std::isfinite(F[k])) throw Error(ErrorKind::NonFiniteForce, "force sampler returned a non-finite value");
}

Characteristic trace(const ForceSampler& sampler, double s, double t, const double* x, const double* v, int substeps,
                     bool integrate_k) {
  const int d = sampler.d();
  Characteristic c;
  std::copy(x, x + d, c.x.begin());
  std::copy(v, v + d, c.v.begin());
  if (s == t) return c;
  if (substeps < 1) throw Error(ErrorKind::DomainError, "substeps must be at least 1");
  const double h = (s - t) / substeps;
  double F[6];
  cplx K0, K1;
  sampler.sample(t, c.x.data(), F, integrate_k ? &K0 : nullptr);
  cplx acc{};
  for (int m = 0; m < substeps; ++m) {
    const double tau = t + m * h;
    const double tau1 = m + 1 == substeps ? s : t + (m + 1) * h;
    for (int i = 0; i < d; ++i) {
      c.v[i] += 0.5 * h * F[i];
      c.x[i] += h * c.v[i];
    }
    sampler.sample(tau1, c.x.data(), F, integrate_k ? &K1 : nullptr);
    for (int i = 0; i < d; ++i) c.v[i] += 0.5 * h * F[i];
    if (integrate_k) {
      acc += 0.5 * std::abs(tau1 - tau) * (K0 + K1);
      K0 = K1;
    }
  }
  c.k_integral = acc;
  return c;
}

FlowMap integrate_flow(const ForceSampler& sampler, double s, double t, const Lattice& phase, int substeps,
                       std::vector<std::size_t> seeds) {
  const int d = phase.dim() / 2;
  if (d != sampler.d()) throw Error(ErrorKind::GridMismatch, "sampler dimension differs from phase lattice");
  FlowMap m;
  m.s = s;
  m.t = t;
  m.phase = phase;
  if (seeds.empty()) {
    seeds.resize(phase.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  }
  m.seeds = std::move(seeds);
  m.X.resize(d, static_cast<Eigen::Index>(m.seeds.size()));
  m.V.resize(d, static_cast<Eigen::Index>(m.seeds.size()));
  parallel_for_checked(m.seeds.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    phase.unravel(m.seeds[i], idx);
    double x[6], v[6];
    for (int a = 0; a < d; ++a) {
      x[a] = phase.coord(a, idx[a]);
      v[a] = phase.coord(d + a, idx[d + a]);
    }
    const Characteristic c = trace(sampler, s, t, x, v, substeps);
    for (int a = 0; a < d; ++a) {
      m.X(a, static_cast<Eigen::Index>(i)) = c.x[a];
      m.V(a, static_cast<Eigen::Index>(i)) = c.v[a];
    }
  });
  return m;
}

double flow_difference(const FlowMap& a, const FlowMap& b) {
  if (a.seeds != b.seeds || a.phase != b.phase) throw Error(ErrorKind::GridMismatch, "flow maps use different seeds");
  if (a.s != b.s || a.t != b.t) throw Error(ErrorKind::DomainError, "flow maps cover different intervals");
  return parallel_max(a.seeds.size(), [&](std::size_t i) {
    const auto j = static_cast<Eigen::Index>(i);
    return std::sqrt((a.X.col(j) - b.X.col(j)).squaredNorm() + (a.V.col(j) - b.V.col(j)).squaredNorm());
  });
}

namespace {

void probe_point(const Lattice& probe, std::size_t i, double* x) {
  int idx[kMaxDim];
  probe.unravel(i, idx);
  for (int a = 0; a < probe.dim(); ++a) x[a] = probe.coord(a, idx[a]);
}

}  // namespace

double force_difference_sup(const ForceSampler& a, const ForceSampler& b, double tau, const Lattice& probe) {
  const int d = a.d();
  return parallel_max(probe.size(), [&](std::size_t i) {
    double x[6], fa[6], fb[6];
    probe_point(probe, i, x);
    a.force(tau, x, fa);
    b.force(tau, x, fb);
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += (fa[k] - fb[k]) * (fa[k] - fb[k]);
    return std::sqrt(s);
  });
}

double force_gradient_sup(const ForceSampler& a, double tau, const Lattice& probe, double eps) {
  const int d = a.d();
  return parallel_max(probe.size(), [&](std::size_t i) {
    double x[6], fp[6], fm[6];
    probe_point(probe, i, x);
    Eigen::MatrixXd J(d, d);
    for (int c = 0; c < d; ++c) {
      const double keep = x[c];
      x[c] = keep + eps;
      a.force(tau, x, fp);
      x[c] = keep - eps;
      a.force(tau, x, fm);
      x[c] = keep;
      for (int r = 0; r < d; ++r) J(r, c) = (fp[r] - fm[r]) / (2 * eps);
    }
    return Eigen::JacobiSVD<Eigen::MatrixXd>(J).singularValues()(0);
  });
}

double gronwall_envelope(const ForceSampler& F, const ForceSampler& Fb, double s, double t, const Lattice& probe,
                         int nodes, double eps) {
  if (nodes < 2) throw Error(ErrorKind::DomainError, "gronwall_envelope needs at least 2 nodes");
  std::vector<double> tau(nodes), diff(nodes), grow(nodes);
  for (int m = 0; m < nodes; ++m) {
    tau[m] = s + (t - s) * m / (nodes - 1);
    diff[m] = force_difference_sup(F, Fb, tau[m], probe);
    grow[m] = 1.0 + force_gradient_sup(F, tau[m], probe, eps);
  }
  double inner = 0.0, acc = 0.0;
  double prev = diff[0];
  for (int m = 1; m < nodes; ++m) {
    const double h = tau[m] - tau[m - 1];
    inner += 0.5 * h * (grow[m] + grow[m - 1]);
    const double cur = diff[m] * std::exp(inner);
    acc += 0.5 * h * (prev + cur);
    prev = cur;
  }
  return acc;
}

double flow_jacobian_det(const ForceSampler& sampler, double s, double t, const double* x, const double* v,
                         int substeps, double eps) {
  const int d = sampler.d();
  Eigen::MatrixXd J(2 * d, 2 * d);
  double z[12];
  std::copy(x, x + d, z);
  std::copy(v, v + d, z + d);
  for (int c = 0; c < 2 * d; ++c) {
    const double keep = z[c];
    z[c] = keep + eps;
    const Characteristic p = trace(sampler, s, t, z, z + d, substeps);
    z[c] = keep - eps;
    const Characteristic q = trace(sampler, s, t, z, z + d, substeps);
    z[c] = keep;
    for (int r = 0; r < d; ++r) {
      J(r, c) = (p.x[r] - q.x[r]) / (2 * eps);
      J(d + r, c) = (p.v[r] - q.v[r]) / (2 * eps);
    }
  }
  return J.determinant();
}

}  // namespace hvp
