#include "hvp/chartuple.hpp"

namespace hvp {

std::vector<WaveField> gradient(const WaveField& f, Axes which) {
  const int d = f.lattice.dim() / 2;
  const int lo = which == Axes::V ? d : 0;
  const int hi = which == Axes::X ? d : 2 * d;
  std::vector<WaveField> out;
  for (int a = lo; a < hi; ++a) out.push_back(partial(f, a));
  return out;
}

SpatialField spatial_density(const WaveField& alpha) {
  const PhaseGrid g = split_phase(alpha.lattice);
  SpatialField rho(g.x);
  const std::size_t nv = g.nv_total();
  const double w = g.v.cell_volume();
  parallel_for(g.nx_total(), [&](std::size_t ix) {
    const cplx* a = alpha.values.data() + ix * nv;
    rho[ix] = w * serial_pairwise_sum<double>(nv, [&](std::size_t j) { return std::norm(a[j]); });
  });
  return rho;
}

SpatialComplexVectorField phase_density(const WaveField& alpha) {
  const PhaseGrid g = split_phase(alpha.lattice);
  const int d = g.d;
  SpatialComplexVectorField phi(g.x, d);
  const std::size_t nv = g.nv_total();
  const double w = g.v.cell_volume();
  parallel_for(g.nx_total(), [&](std::size_t ix) {
    const cplx* a = alpha.values.data() + ix * nv;
    for (int k = 0; k < d; ++k) {
      const std::size_t st = g.v.stride[k];
      const int n = g.v.n[k];
      const double inv = 0.5 / g.v.h[k];
      phi.comp[k][static_cast<Eigen::Index>(ix)] = w * serial_pairwise_sum<cplx>(nv, [&](std::size_t j) {
        const int i = static_cast<int>((j / st) % static_cast<std::size_t>(n));
        const cplx up = i + 1 < n ? a[j + st] : cplx{};
        const cplx dn = i > 0 ? a[j - st] : cplx{};
        return std::conj(a[j]) * (up - dn) * inv;
      });
    }
  });
  return phi;
}

CharacteristicTuple characteristic_tuple(const WaveField& alpha, const Convolver& conv) {
  CharacteristicTuple t;
  t.rho = spatial_density(alpha);
  t.phase_density = phase_density(alpha);
  t.force = conv.force(t.rho);
  t.phase_force = conv.phase_force(t.phase_density);
  return t;
}

CharacteristicTuple characteristic_tuple(const WaveField& alpha, const InteractionKernel& kernel, ConvMethod method) {
  const PhaseGrid g = split_phase(alpha.lattice);
  return characteristic_tuple(alpha, Convolver(g.x, kernel, method));
}

}  // namespace hvp
