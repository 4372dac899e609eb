#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "hvp/error.hpp"
#include "hvp/lattice.hpp"
#include "hvp/parallel.hpp"

namespace hvp {

using cplx = std::complex<double>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

template <class S>
struct GridField {
  Lattice lattice;
  Vec<S> values;

  GridField() = default;
  explicit GridField(Lattice l) : lattice(std::move(l)), values(Vec<S>::Zero(static_cast<Eigen::Index>(lattice.size()))) {}
  GridField(Lattice l, Vec<S> v) : lattice(std::move(l)), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != lattice.size())
      throw Error(ErrorKind::GridMismatch, "value count differs from lattice size");
  }

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  S& operator[](std::size_t i) { return values[static_cast<Eigen::Index>(i)]; }
  const S& operator[](std::size_t i) const { return values[static_cast<Eigen::Index>(i)]; }
};

using WaveField = GridField<cplx>;
using RealField = GridField<double>;
using SpatialField = GridField<double>;
using ComplexSpatialField = GridField<cplx>;

template <class S>
struct VectorField {
  Lattice lattice;
  std::vector<Vec<S>> comp;

  VectorField() = default;
  VectorField(Lattice l, int components)
      : lattice(std::move(l)), comp(components, Vec<S>::Zero(static_cast<Eigen::Index>(lattice.size()))) {}

  int components() const { return static_cast<int>(comp.size()); }
  std::size_t size() const { return lattice.size(); }
};

using SpatialVectorField = VectorField<double>;
using SpatialComplexVectorField = VectorField<cplx>;

namespace detail {
template <class S>
double magnitude(const S& s) {
  return std::abs(s);
}
}  // namespace detail

template <class S>
double sup_norm(const GridField<S>& f) {
  return parallel_max(f.size(), [&](std::size_t i) { return detail::magnitude(f[i]); });
}

template <class S>
double sup_norm(const VectorField<S>& f) {
  return parallel_max(f.size(), [&](std::size_t i) {
    double s = 0.0;
    for (const auto& c : f.comp) s += std::norm(c[static_cast<Eigen::Index>(i)]);
    return std::sqrt(s);
  });
}

// Riemann-sum L^p norm over the lattice, p >= 1 or kInf.
template <class S>
double lp_norm(const GridField<S>& f, double p) {
  if (std::isinf(p)) return sup_norm(f);
  if (!(p >= 1.0)) throw Error(ErrorKind::DomainError, "lp_norm needs p >= 1");
  const double w = f.lattice.cell_volume();
  double s;
  if (p == 1.0)
    s = pairwise_sum<double>(f.size(), [&](std::size_t i) { return detail::magnitude(f[i]); });
  else if (p == 2.0)
    s = pairwise_sum<double>(f.size(), [&](std::size_t i) { return std::norm(f[i]); });
  else
    s = pairwise_sum<double>(f.size(), [&](std::size_t i) { return std::pow(detail::magnitude(f[i]), p); });
  return std::pow(s * w, 1.0 / p);
}

template <class S>
double lp_norm(const VectorField<S>& f, double p) {
  GridField<double> mag(f.lattice);
  parallel_for(f.size(), [&](std::size_t i) {
    double s = 0.0;
    for (const auto& c : f.comp) s += std::norm(c[static_cast<Eigen::Index>(i)]);
    mag[i] = std::sqrt(s);
  });
  return lp_norm(mag, p);
}

template <class S>
S integral(const GridField<S>& f) {
  return pairwise_sum<S>(f.size(), [&](std::size_t i) { return f[i]; }) * f.lattice.cell_volume();
}

// Sesquilinear: sum conj(f) g over cells.
template <class S>
S inner(const GridField<S>& f, const GridField<S>& g) {
  require_same(f.lattice, g.lattice, "inner");
  if constexpr (std::is_same_v<S, double>)
    return pairwise_sum<double>(f.size(), [&](std::size_t i) { return f[i] * g[i]; }) * f.lattice.cell_volume();
  else
    return pairwise_sum<S>(f.size(), [&](std::size_t i) { return std::conj(f[i]) * g[i]; }) * f.lattice.cell_volume();
}

template <class S>
GridField<S> modulus_squared(const GridField<S>& f) {
  GridField<S> out(f.lattice);
  parallel_for(f.size(), [&](std::size_t i) { out[i] = std::norm(f[i]); });
  return out;
}

inline RealField modulus_squared(const WaveField& f) {
  RealField out(f.lattice);
  parallel_for(f.size(), [&](std::size_t i) { out[i] = std::norm(f[i]); });
  return out;
}

template <class S>
RealField modulus(const GridField<S>& f) {
  RealField out(f.lattice);
  parallel_for(f.size(), [&](std::size_t i) { out[i] = std::abs(f[i]); });
  return out;
}

// y <- a x + y
template <class S, class A>
void axpy(A a, const GridField<S>& x, GridField<S>& y) {
  require_same(x.lattice, y.lattice, "axpy");
  y.values += S(a) * x.values;
}

template <class S, class A>
GridField<S> scale(A a, GridField<S> f) {
  f.values *= S(a);
  return f;
}

template <class S>
GridField<S> operator-(const GridField<S>& a, const GridField<S>& b) {
  require_same(a.lattice, b.lattice, "difference");
  return GridField<S>(a.lattice, a.values - b.values);
}

template <class S>
GridField<S> operator+(const GridField<S>& a, const GridField<S>& b) {
  require_same(a.lattice, b.lattice, "sum");
  return GridField<S>(a.lattice, a.values + b.values);
}

template <class S>
bool all_finite(const GridField<S>& f) {
  return f.values.allFinite();
}

template <class S>
VectorField<S> operator-(const VectorField<S>& a, const VectorField<S>& b) {
  require_same(a.lattice, b.lattice, "difference");
  VectorField<S> out = a;
  for (int k = 0; k < a.components(); ++k) out.comp[k] -= b.comp[k];
  return out;
}

template <class S>
GridField<S> component(const VectorField<S>& f, int k) {
  return GridField<S>(f.lattice, f.comp[k]);
}

}  // namespace hvp
