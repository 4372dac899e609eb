#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hvp {

inline constexpr int kMaxDim = 12;

// Uniform node-centred tensor grid on a box. Row-major: the last axis is
// contiguous. Node i on axis a sits at lo[a] + (i + 1/2) h[a].
struct Lattice {
  std::vector<int> n;
  std::vector<double> lo, hi, h;
  std::vector<std::size_t> stride;

  int dim() const { return static_cast<int>(n.size()); }
  std::size_t size() const { return n.empty() ? 0 : stride[0] * static_cast<std::size_t>(n[0]); }
  double coord(int axis, int i) const { return lo[axis] + (i + 0.5) * h[axis]; }
  double cell_volume() const;
  double cell_diagonal() const;
  double box_diagonal() const;

  void unravel(std::size_t index, int* idx) const {
    for (int a = dim() - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(index % static_cast<std::size_t>(n[a]));
      index /= static_cast<std::size_t>(n[a]);
    }
  }
  std::size_t ravel(const int* idx) const {
    std::size_t r = 0;
    for (int a = 0; a < dim(); ++a) r += stride[a] * static_cast<std::size_t>(idx[a]);
    return r;
  }

  bool operator==(const Lattice& o) const { return n == o.n && lo == o.lo && hi == o.hi; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }
};

Lattice make_lattice(std::vector<int> n, std::vector<double> lo, std::vector<double> hi);

// Concatenation: axes of a followed by axes of b.
Lattice product(const Lattice& a, const Lattice& b);

struct GridConfig {
  int d = 3;
  std::vector<int> nx{16, 16, 16}, nv{16, 16, 16};
  std::vector<double> x_lo{-4, -4, -4}, x_hi{4, 4, 4};
  std::vector<double> v_lo{-4, -4, -4}, v_hi{4, 4, 4};
  std::uint64_t max_points = std::uint64_t{1} << 25;
};

// Phase space R^{2d}: index order (x_1..x_d, v_1..v_d).
struct PhaseGrid {
  int d = 0;
  Lattice phase;
  Lattice x;
  Lattice v;

  std::size_t size() const { return phase.size(); }
  std::size_t nx_total() const { return x.size(); }
  std::size_t nv_total() const { return v.size(); }
  bool operator==(const PhaseGrid& o) const { return phase == o.phase && d == o.d; }
  bool operator!=(const PhaseGrid& o) const { return !(*this == o); }
};

PhaseGrid make_grid(const GridConfig& config);
PhaseGrid make_grid(const Lattice& x, const Lattice& v);

void require_same(const Lattice& a, const Lattice& b, const char* what);

}  // namespace hvp

namespace hvp {
// Splits a 2d-axis lattice into its x and v halves.
PhaseGrid split_phase(const Lattice& phase);
}  // namespace hvp
