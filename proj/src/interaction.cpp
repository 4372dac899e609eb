#include "hvp/interaction.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "hvp/norms.hpp"

namespace hvp {

KernelKind parse_kernel_kind(const std::string& s) {
  if (s == "newtonian") return KernelKind::Newtonian;
  if (s == "mollified") return KernelKind::Mollified;
  if (s == "zero") return KernelKind::Zero;
  throw Error(ErrorKind::ValidationError, "unknown kernel kind '" + s + "'");
}

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Newtonian: return "newtonian";
    case KernelKind::Mollified: return "mollified";
    case KernelKind::Zero: return "zero";
  }
  return "zero";
}

ConvMethod parse_conv_method(const std::string& s) {
  if (s == "direct") return ConvMethod::Direct;
  if (s == "fft") return ConvMethod::Fft;
  throw Error(ErrorKind::ValidationError, "unknown convolution method '" + s + "'");
}

std::string to_string(ConvMethod m) { return m == ConvMethod::Direct ? "direct" : "fft"; }

InteractionKernel make_kernel(KernelKind kind, int d, double coupling, double epsilon) {
  if (!std::isfinite(coupling)) throw Error(ErrorKind::DomainError, "coupling must be finite");
  if (kind != KernelKind::Zero && d < 3) throw Error(ErrorKind::DomainError, "newtonian kernel needs d >= 3");
  if (kind == KernelKind::Mollified && !(epsilon > 0.0)) throw Error(ErrorKind::DomainError, "mollified kernel needs epsilon > 0");
  if (d < 1) throw Error(ErrorKind::DomainError, "d must be positive");
  return {kind, d, coupling, epsilon};
}

namespace {

double norm2(const double* x, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += x[i] * x[i];
  return s;
}

double sphere_factor(const InteractionKernel& k) { return k.coupling / unit_sphere_area(k.d); }

}  // namespace

Eigen::VectorXd kernel_gradient(const InteractionKernel& k, const double* x) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(k.d);
  if (k.kind == KernelKind::Zero) return g;
  const double r2 = norm2(x, k.d);
  double s;
  if (k.kind == KernelKind::Mollified && r2 < k.epsilon * k.epsilon) {
    s = sphere_factor(k) / std::pow(k.epsilon, k.d);
  } else {
    if (r2 == 0.0) throw Error(ErrorKind::SingularPoint, "kernel gradient at the origin");
    s = sphere_factor(k) / std::pow(r2, 0.5 * k.d);
  }
  for (int i = 0; i < k.d; ++i) g[i] = s * x[i];
  return g;
}

double kernel_potential(const InteractionKernel& k, const double* x) {
  if (k.kind == KernelKind::Zero) return 0.0;
  const double r2 = norm2(x, k.d);
  const double c = sphere_factor(k);
  const int d = k.d;
  if (k.kind == KernelKind::Mollified && r2 < k.epsilon * k.epsilon) {
    const double e = k.epsilon;
    return -c * (d / (2.0 * (d - 2)) * std::pow(e, 2 - d) - r2 / (2.0 * std::pow(e, d)));
  }
  if (r2 == 0.0) throw Error(ErrorKind::SingularPoint, "kernel potential at the origin");
  return -c / ((d - 2) * std::pow(r2, 0.5 * (d - 2)));
}

Eigen::MatrixXd kernel_hessian(const InteractionKernel& k, const double* x) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k.d, k.d);
  if (k.kind == KernelKind::Zero) return h;
  const double r2 = norm2(x, k.d);
  const double c = sphere_factor(k);
  if (k.kind == KernelKind::Mollified && r2 < k.epsilon * k.epsilon) {
    h.diagonal().setConstant(c / std::pow(k.epsilon, k.d));
    return h;
  }
  if (r2 == 0.0) throw Error(ErrorKind::SingularPoint, "kernel hessian at the origin");
  const double rd = std::pow(r2, 0.5 * k.d);
  for (int i = 0; i < k.d; ++i)
    for (int j = 0; j < k.d; ++j) h(i, j) = c * ((i == j ? 1.0 : 0.0) - k.d * x[i] * x[j] / r2) / rd;
  return h;
}

struct Convolver::Impl {
  int d = 0;
  std::vector<int> dn;             // 2n-1 per axis
  std::vector<std::size_t> dstride;
  std::vector<std::vector<double>> grad;  // -vol grad_k Gamma(o h)
  std::vector<double> pot;                // vol Gamma(o h)
  std::vector<int> m;                     // padded sizes 2n
  std::vector<std::size_t> mstride;
  std::size_t msize = 0;
  std::vector<std::vector<cplx>> grad_hat;
  std::vector<cplx> pot_hat;

  std::size_t table_index(const int* target, const int* source, const Lattice& l) const {
    std::size_t r = 0;
    for (int a = 0; a < d; ++a) r += dstride[a] * static_cast<std::size_t>(target[a] - source[a] + l.n[a] - 1);
    return r;
  }
};

namespace {

void fft_nd(std::vector<cplx>& data, const std::vector<int>& dims, const std::vector<std::size_t>& stride, bool inverse) {
  const std::size_t total = data.size();
  for (std::size_t a = 0; a < dims.size(); ++a) {
    const std::size_t len = static_cast<std::size_t>(dims[a]);
    const std::size_t st = stride[a];
    const long long lines = static_cast<long long>(total / len);
#pragma omp parallel num_threads(threads())
    {
      Eigen::FFT<double> fft;
      std::vector<cplx> in(len), out(len);
#pragma omp for schedule(static)
      for (long long line = 0; line < lines; ++line) {
        const std::size_t l = static_cast<std::size_t>(line);
        const std::size_t base = (l / st) * st * len + l % st;
        for (std::size_t i = 0; i < len; ++i) in[i] = data[base + i * st];
        if (inverse)
          fft.inv(out, in);
        else
          fft.fwd(out, in);
        for (std::size_t i = 0; i < len; ++i) data[base + i * st] = out[i];
      }
    }
  }
}

// Cell average of Gamma over the cell centred at 0, by midpoint subsampling.
double self_cell_potential(const InteractionKernel& k, const Lattice& l) {
  const int d = k.d;
  const int s = d <= 3 ? 16 : 6;
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(s);
  const double acc = serial_pairwise_sum<double>(total, [&](std::size_t i) {
    double x[kMaxDim];
    for (int a = d - 1; a >= 0; --a) {
      const int j = static_cast<int>(i % s);
      i /= s;
      x[a] = ((j + 0.5) / s - 0.5) * l.h[a];
    }
    return kernel_potential(k, x);
  });
  return acc / static_cast<double>(total);
}

}  // namespace

Convolver::Convolver(const Lattice& x, const InteractionKernel& kernel, ConvMethod method)
    : lattice_(x), kernel_(kernel), method_(method), impl_(std::make_unique<Impl>()) {
  if (x.dim() != kernel.d) throw Error(ErrorKind::GridMismatch, "kernel dimension differs from x-lattice");
  Impl& I = *impl_;
  const int d = kernel.d;
  I.d = d;
  I.dn.resize(d);
  for (int a = 0; a < d; ++a) I.dn[a] = 2 * x.n[a] - 1;
  I.dstride.assign(d, 1);
  for (int a = d - 2; a >= 0; --a) I.dstride[a] = I.dstride[a + 1] * static_cast<std::size_t>(I.dn[a + 1]);
  const std::size_t dsize = I.dstride[0] * static_cast<std::size_t>(I.dn[0]);
  const double vol = x.cell_volume();
  I.grad.assign(d, std::vector<double>(dsize, 0.0));
  I.pot.assign(dsize, 0.0);
  const double self_pot = kernel.kind == KernelKind::Zero ? 0.0 : self_cell_potential(kernel, x);
  parallel_for(dsize, [&](std::size_t t) {
    double z[kMaxDim];
    bool origin = true;
    std::size_t rem = t;
    for (int a = 0; a < d; ++a) {
      const int o = static_cast<int>(rem / I.dstride[a]) - (x.n[a] - 1);
      rem %= I.dstride[a];
      z[a] = o * x.h[a];
      origin = origin && o == 0;
    }
    if (kernel.kind == KernelKind::Zero) return;
    if (origin) {
      // grad Gamma is odd, so its cell average vanishes for both kernels.
      I.pot[t] = vol * self_pot;
      return;
    }
    const Eigen::VectorXd g = kernel_gradient(kernel, z);
    for (int k = 0; k < d; ++k) I.grad[k][t] = -vol * g[k];
    I.pot[t] = vol * kernel_potential(kernel, z);
  });
  if (method == ConvMethod::Fft) {
    I.m.resize(d);
    for (int a = 0; a < d; ++a) I.m[a] = 2 * x.n[a];
    I.mstride.assign(d, 1);
    for (int a = d - 2; a >= 0; --a) I.mstride[a] = I.mstride[a + 1] * static_cast<std::size_t>(I.m[a + 1]);
    I.msize = I.mstride[0] * static_cast<std::size_t>(I.m[0]);
    auto spread = [&](const std::vector<double>& table) {
      std::vector<cplx> out(I.msize, 0.0);
      parallel_for(dsize, [&](std::size_t t) {
        std::size_t rem = t, mi = 0;
        for (int a = 0; a < d; ++a) {
          const int o = static_cast<int>(rem / I.dstride[a]) - (x.n[a] - 1);
          rem %= I.dstride[a];
          mi += I.mstride[a] * static_cast<std::size_t>((o + I.m[a]) % I.m[a]);
        }
        out[mi] = table[t];
      });
      fft_nd(out, I.m, I.mstride, false);
      return out;
    };
    for (int k = 0; k < d; ++k) I.grad_hat.push_back(spread(I.grad[k]));
    I.pot_hat = spread(I.pot);
  }
}

Convolver::~Convolver() = default;

double Convolver::force_table(int k, const int* offset) const {
  std::size_t r = 0;
  for (int a = 0; a < impl_->d; ++a) r += impl_->dstride[a] * static_cast<std::size_t>(offset[a] + lattice_.n[a] - 1);
  return impl_->grad[k][r];
}

namespace {

template <class S>
std::vector<cplx> pad_field(const Vec<S>& v, const Lattice& l, const Convolver::Impl& I) {
  std::vector<cplx> out(I.msize, 0.0);
  parallel_for(l.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    l.unravel(i, idx);
    std::size_t mi = 0;
    for (int a = 0; a < I.d; ++a) mi += I.mstride[a] * static_cast<std::size_t>(idx[a]);
    out[mi] = v[static_cast<Eigen::Index>(i)];
  });
  return out;
}

template <class S>
Vec<S> crop(const std::vector<cplx>& data, const Lattice& l, const Convolver::Impl& I) {
  Vec<S> out(static_cast<Eigen::Index>(l.size()));
  parallel_for(l.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    l.unravel(i, idx);
    std::size_t mi = 0;
    for (int a = 0; a < I.d; ++a) mi += I.mstride[a] * static_cast<std::size_t>(idx[a]);
    if constexpr (std::is_same_v<S, double>)
      out[static_cast<Eigen::Index>(i)] = data[mi].real();
    else
      out[static_cast<Eigen::Index>(i)] = data[mi];
  });
  return out;
}

// out(i) = sum_j table(i - j) src(j), pairwise over j.
template <class S>
Vec<S> direct_apply(const std::vector<double>& table, const Vec<S>& src, const Lattice& l, const Convolver::Impl& I) {
  Vec<S> out(static_cast<Eigen::Index>(l.size()));
  const std::size_t n = l.size();
  parallel_for(n, [&](std::size_t i) {
    int ti[kMaxDim];
    l.unravel(i, ti);
    out[static_cast<Eigen::Index>(i)] = serial_pairwise_sum<S>(n, [&](std::size_t j) {
      int sj[kMaxDim];
      l.unravel(j, sj);
      return table[I.table_index(ti, sj, l)] * src[static_cast<Eigen::Index>(j)];
    });
  });
  return out;
}

}  // namespace

SpatialVectorField Convolver::force(const SpatialField& rho) const {
  require_same(rho.lattice, lattice_, "force: density lattice");
  const Impl& I = *impl_;
  SpatialVectorField F(lattice_, I.d);
  if (kernel_.kind == KernelKind::Zero) return F;
  if (method_ == ConvMethod::Direct) {
    for (int k = 0; k < I.d; ++k) F.comp[k] = direct_apply(I.grad[k], rho.values, lattice_, I);
    return F;
  }
  std::vector<cplx> rho_hat = pad_field(rho.values, lattice_, I);
  fft_nd(rho_hat, I.m, I.mstride, false);
  for (int k = 0; k < I.d; ++k) {
    std::vector<cplx> w(I.msize);
    parallel_for(I.msize, [&](std::size_t i) { w[i] = rho_hat[i] * I.grad_hat[k][i]; });
    fft_nd(w, I.m, I.mstride, true);
    F.comp[k] = crop<double>(w, lattice_, I);
  }
  return F;
}

ComplexSpatialField Convolver::phase_force(const SpatialComplexVectorField& phi) const {
  require_same(phi.lattice, lattice_, "phase_force: phase density lattice");
  const Impl& I = *impl_;
  ComplexSpatialField K(lattice_);
  if (kernel_.kind == KernelKind::Zero) return K;
  if (method_ == ConvMethod::Direct) {
    for (int k = 0; k < I.d; ++k) K.values += direct_apply(I.grad[k], phi.comp[k], lattice_, I);
    return K;
  }
  std::vector<cplx> acc(I.msize, 0.0);
  for (int k = 0; k < I.d; ++k) {
    std::vector<cplx> w = pad_field(phi.comp[k], lattice_, I);
    fft_nd(w, I.m, I.mstride, false);
    parallel_for(I.msize, [&](std::size_t i) { acc[i] += w[i] * I.grad_hat[k][i]; });
  }
  fft_nd(acc, I.m, I.mstride, true);
  K.values = crop<cplx>(acc, lattice_, I);
  return K;
}

SpatialField Convolver::potential(const SpatialField& rho) const {
  require_same(rho.lattice, lattice_, "potential: density lattice");
  const Impl& I = *impl_;
  SpatialField U(lattice_);
  if (kernel_.kind == KernelKind::Zero) return U;
  if (method_ == ConvMethod::Direct) {
    U.values = direct_apply(I.pot, rho.values, lattice_, I);
    return U;
  }
  std::vector<cplx> w = pad_field(rho.values, lattice_, I);
  fft_nd(w, I.m, I.mstride, false);
  parallel_for(I.msize, [&](std::size_t i) { w[i] *= I.pot_hat[i]; });
  fft_nd(w, I.m, I.mstride, true);
  U.values = crop<double>(w, lattice_, I);
  return U;
}

SpatialVectorField convolve_gradient_direct(const SpatialField& rho, const InteractionKernel& k) {
  return Convolver(rho.lattice, k, ConvMethod::Direct).force(rho);
}

ComplexSpatialField convolve_gradient_direct(const SpatialComplexVectorField& phi, const InteractionKernel& k) {
  return Convolver(phi.lattice, k, ConvMethod::Direct).phase_force(phi);
}

SpatialVectorField convolve_gradient_fft(const SpatialField& rho, const InteractionKernel& k) {
  return Convolver(rho.lattice, k, ConvMethod::Fft).force(rho);
}

ComplexSpatialField convolve_gradient_fft(const SpatialComplexVectorField& phi, const InteractionKernel& k) {
  return Convolver(phi.lattice, k, ConvMethod::Fft).phase_force(phi);
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// -rho-free part of the boundary term: int_{dB(c,R)} d_j Gamma(x - y) nu_i(y) ds.
Eigen::MatrixXd sphere_flux(const InteractionKernel& k, const double* x, const double* c, double R) {
  const int d = k.d;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  bool centred = true;
  for (int a = 0; a < d; ++a) centred = centred && x[a] == c[a];
  if (centred) {
    m.diagonal().setConstant(-k.coupling / d);
    return m;
  }
  if (d != 3) throw Error(ErrorKind::DomainError, "off-centre boundary quadrature is implemented for d = 3");
  const int nt = 48, np = 96;
  std::vector<double> ct, wt;
  gauss_legendre(nt, ct, wt);
  for (int i = 0; i < nt; ++i) {
    const double st = std::sqrt(1.0 - ct[i] * ct[i]);
    for (int j = 0; j < np; ++j) {
      const double ph = 2.0 * std::numbers::pi * (j + 0.5) / np;
      const double nu[3] = {st * std::cos(ph), st * std::sin(ph), ct[i]};
      double z[3];
      for (int a = 0; a < 3; ++a) z[a] = x[a] - (c[a] + R * nu[a]);
      const Eigen::VectorXd g = kernel_gradient(k, z);
      const double w = wt[i] * (2.0 * std::numbers::pi / np) * R * R;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m(a, b) += w * g[b] * nu[a];
    }
  }
  return m;
}

}  // namespace

HessianPatch hessian_potential(const SpatialField& rho, const InteractionKernel& k, const std::vector<int>& x0, double R,
                               double patch) {
  const Lattice& l = rho.lattice;
  const int d = l.dim();
  if (static_cast<int>(x0.size()) != d) throw Error(ErrorKind::DomainError, "x0 index has wrong dimension");
  double hmax = 0.0;
  for (double h : l.h) hmax = std::max(hmax, h);
  if (R < 2.0 * hmax) throw Error(ErrorKind::DomainError, "hessian_potential needs R >= 2 cells");
  double c[kMaxDim];
  for (int a = 0; a < d; ++a) c[a] = l.coord(a, x0[a]);
  const double reach = std::min(patch, 0.5 * R);
  HessianPatch out;
  for (std::size_t i = 0; i < l.size(); ++i) {
    int idx[kMaxDim];
    l.unravel(i, idx);
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += std::pow(l.coord(a, idx[a]) - c[a], 2);
    if (r2 < reach * reach || i == l.ravel(x0.data())) out.nodes.push_back(i);
  }
  const double vol = l.cell_volume();
  out.hessian.assign(out.nodes.size(), Eigen::MatrixXd::Zero(d, d));
  if (k.kind == KernelKind::Zero) return out;
  parallel_for(out.nodes.size(), [&](std::size_t p) {
    const std::size_t xi = out.nodes[p];
    int ti[kMaxDim];
    l.unravel(xi, ti);
    double x[kMaxDim];
    for (int a = 0; a < d; ++a) x[a] = l.coord(a, ti[a]);
    const double rx = rho[xi];
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t j = 0; j < l.size(); ++j) {
      if (j == xi) continue;  // even integrand times odd difference: no self-cell term
      int sj[kMaxDim];
      l.unravel(j, sj);
      double z[kMaxDim], yr2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double y = l.coord(a, sj[a]);
        z[a] = x[a] - y;
        yr2 += (y - c[a]) * (y - c[a]);
      }
      const double weight = yr2 > R * R ? rho[j] : rho[j] - rx;
      if (weight != 0.0) acc += (vol * weight) * kernel_hessian(k, z);
    }
    acc -= rx * sphere_flux(k, x, c, R);
    out.hessian[p] = acc;
  });
  return out;
}

}  // namespace hvp
