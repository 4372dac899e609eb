#pragma once

#include <vector>

#include "hvp/field.hpp"
#include "hvp/interaction.hpp"

namespace hvp {

enum class Axes { X, V, All };

// Centred difference along one lattice axis; values beyond the box are 0.
template <class S>
GridField<S> partial(const GridField<S>& f, int axis) {
  const Lattice& l = f.lattice;
  GridField<S> out(l);
  const std::size_t st = l.stride[axis];
  const int n = l.n[axis];
  const double inv = 0.5 / l.h[axis];
  parallel_for(f.size(), [&](std::size_t i) {
    const int k = static_cast<int>((i / st) % static_cast<std::size_t>(n));
    const S up = k + 1 < n ? f[i + st] : S{};
    const S dn = k > 0 ? f[i - st] : S{};
    out[i] = (up - dn) * inv;
  });
  return out;
}

std::vector<WaveField> gradient(const WaveField& f, Axes which);

SpatialField spatial_density(const WaveField& alpha);
SpatialComplexVectorField phase_density(const WaveField& alpha);

struct CharacteristicTuple {
  SpatialField rho;
  SpatialVectorField force;
  SpatialComplexVectorField phase_density;
  ComplexSpatialField phase_force;
};

CharacteristicTuple characteristic_tuple(const WaveField& alpha, const Convolver& conv);
CharacteristicTuple characteristic_tuple(const WaveField& alpha, const InteractionKernel& kernel,
                                         ConvMethod method = ConvMethod::Fft);

}  // namespace hvp
