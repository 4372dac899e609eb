#pragma once

#include <array>
#include <cmath>

#include "hvp/field.hpp"

namespace hvp {

// Multilinear weights of one point. Zero-weight corners and corners outside
// the lattice are dropped; a point outside the box has no corners at all.
struct Stencil {
  static constexpr int kCapacity = 64;
  int count = 0;
  std::array<std::size_t, kCapacity> index{};
  std::array<double, kCapacity> weight{};

  template <class V>
  auto apply(const V& values) const {
    using S = std::decay_t<decltype(values[0])>;
    S s{};
    for (int c = 0; c < count; ++c) s += weight[c] * values[static_cast<Eigen::Index>(index[c])];
    return s;
  }
};

inline Stencil make_stencil(const Lattice& l, const double* p) {
  Stencil st;
  const int dim = l.dim();
  if (dim > 6) throw Error(ErrorKind::DomainError, "stencil supports at most 6 axes");
  std::array<int, 6> cnt{};
  std::array<std::array<std::size_t, 2>, 6> off{};
  std::array<std::array<double, 2>, 6> w{};
  for (int a = 0; a < dim; ++a) {
    const double x = p[a];
    if (!(x >= l.lo[a] && x <= l.hi[a])) return st;
    const double u = (x - l.lo[a]) / l.h[a] - 0.5;
    double fl = std::floor(u);
    double t = u - fl;
    // Points within rounding of a node hit it exactly.
    if (t < 1e-12) {
      t = 0.0;
    } else if (t > 1.0 - 1e-12) {
      t = 0.0;
      fl += 1.0;
    }
    const int i0 = static_cast<int>(fl);
    int c = 0;
    if (i0 >= 0 && t < 1.0) {
      off[a][c] = static_cast<std::size_t>(i0) * l.stride[a];
      w[a][c++] = 1.0 - t;
    }
    if (t > 0.0 && i0 + 1 < l.n[a]) {
      off[a][c] = static_cast<std::size_t>(i0 + 1) * l.stride[a];
      w[a][c++] = t;
    }
    if (c == 0) return st;
    cnt[a] = c;
  }
  // Expand the tensor product axis by axis.
  st.count = 1;
  st.index[0] = 0;
  st.weight[0] = 1.0;
  for (int a = 0; a < dim; ++a) {
    if (cnt[a] == 1) {
      for (int k = 0; k < st.count; ++k) {
        st.index[k] += off[a][0];
        st.weight[k] *= w[a][0];
      }
    } else {
      for (int k = 0; k < st.count; ++k) {
        st.index[k + st.count] = st.index[k] + off[a][1];
        st.weight[k + st.count] = st.weight[k] * w[a][1];
        st.index[k] += off[a][0];
        st.weight[k] *= w[a][0];
      }
      st.count *= 2;
    }
  }
  return st;
}

template <class S>
S interpolate(const GridField<S>& f, const double* point) {
  return make_stencil(f.lattice, point).apply(f.values);
}

template <class S, std::size_t N>
S interpolate(const GridField<S>& f, const std::array<double, N>& point) {
  return interpolate(f, point.data());
}

}  // namespace hvp
