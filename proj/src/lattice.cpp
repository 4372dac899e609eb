#include "hvp/lattice.hpp"

#include <cmath>
#include <sstream>

#include "hvp/error.hpp"

namespace hvp {

double Lattice::cell_volume() const {
  double v = 1.0;
  for (double s : h) v *= s;
  return v;
}

double Lattice::cell_diagonal() const {
  double s = 0.0;
  for (double x : h) s += x * x;
  return std::sqrt(s);
}

double Lattice::box_diagonal() const {
  double s = 0.0;
  for (int a = 0; a < dim(); ++a) s += (hi[a] - lo[a]) * (hi[a] - lo[a]);
  return std::sqrt(s);
}

Lattice make_lattice(std::vector<int> n, std::vector<double> lo, std::vector<double> hi) {
  if (n.empty() || n.size() != lo.size() || n.size() != hi.size())
    throw Error(ErrorKind::BadExtent, "axis count mismatch");
  if (static_cast<int>(n.size()) > kMaxDim)
    throw Error(ErrorKind::DomainError, "too many axes");
  Lattice l;
  l.h.resize(n.size());
  for (std::size_t a = 0; a < n.size(); ++a) {
    if (!(std::isfinite(lo[a]) && std::isfinite(hi[a])) || !(lo[a] < hi[a])) {
      std::ostringstream os;
      os << "axis " << a << ": lo " << lo[a] << " must be below hi " << hi[a];
      throw Error(ErrorKind::BadExtent, os.str());
    }
    if (n[a] < 1) throw Error(ErrorKind::BadExtent, "axis with no points");
    l.h[a] = (hi[a] - lo[a]) / n[a];
  }
  l.n = std::move(n);
  l.lo = std::move(lo);
  l.hi = std::move(hi);
  l.stride.assign(l.n.size(), 1);
  for (int a = static_cast<int>(l.n.size()) - 2; a >= 0; --a)
    l.stride[a] = l.stride[a + 1] * static_cast<std::size_t>(l.n[a + 1]);
  return l;
}

Lattice product(const Lattice& a, const Lattice& b) {
  std::vector<int> n = a.n;
  std::vector<double> lo = a.lo, hi = a.hi;
  n.insert(n.end(), b.n.begin(), b.n.end());
  lo.insert(lo.end(), b.lo.begin(), b.lo.end());
  hi.insert(hi.end(), b.hi.begin(), b.hi.end());
  return make_lattice(n, lo, hi);
}

PhaseGrid make_grid(const GridConfig& c) {
  if (c.d < 1) throw Error(ErrorKind::BadExtent, "d must be at least 1");
  const auto d = static_cast<std::size_t>(c.d);
  if (c.nx.size() != d || c.nv.size() != d || c.x_lo.size() != d || c.x_hi.size() != d ||
      c.v_lo.size() != d || c.v_hi.size() != d)
    throw Error(ErrorKind::BadExtent, "per-axis lists must have d entries");
  long double total = 1.0L;
  for (std::size_t a = 0; a < d; ++a) {
    if (c.nx[a] < 4 || c.nv[a] < 4) throw Error(ErrorKind::BadExtent, "point counts must be at least 4");
    total *= static_cast<long double>(c.nx[a]) * static_cast<long double>(c.nv[a]);
  }
  if (total > static_cast<long double>(c.max_points)) {
    std::ostringstream os;
    os << "grid has " << static_cast<double>(total) << " nodes, cap is " << c.max_points;
    throw Error(ErrorKind::BudgetExceeded, os.str());
  }
  return make_grid(make_lattice(c.nx, c.x_lo, c.x_hi), make_lattice(c.nv, c.v_lo, c.v_hi));
}

PhaseGrid make_grid(const Lattice& x, const Lattice& v) {
  if (x.dim() != v.dim()) throw Error(ErrorKind::BadExtent, "x and v dimension differ");
  PhaseGrid g;
  g.d = x.dim();
  g.x = x;
  g.v = v;
  g.phase = product(x, v);
  return g;
}

void require_same(const Lattice& a, const Lattice& b, const char* what) {
  if (a != b) throw Error(ErrorKind::GridMismatch, what);
}

}  // namespace hvp

namespace hvp {

PhaseGrid split_phase(const Lattice& l) {
  const int n = l.dim();
  if (n % 2) throw Error(ErrorKind::GridMismatch, "phase lattice needs an even number of axes");
  const int d = n / 2;
  auto cut = [&](int from) {
    return make_lattice(std::vector<int>(l.n.begin() + from, l.n.begin() + from + d),
                        std::vector<double>(l.lo.begin() + from, l.lo.begin() + from + d),
                        std::vector<double>(l.hi.begin() + from, l.hi.begin() + from + d));
  };
  return make_grid(cut(0), cut(d));
}

}  // namespace hvp
