#pragma once

#include <string>
#include <vector>

#include "hvp/field.hpp"

namespace hvp {

inline constexpr int kSnapshotVersion = 1;

// One JSON header line, then little-endian doubles in index order:
// (re, im) pairs for complex fields, single values for real ones. Vector
// fields store their components one after another.
struct Snapshot {
  std::string kind;  // "complex" or "real"
  int components = 1;
  int phase_d = 0;   // d when the lattice is a phase grid, else 0
  double time = 0.0;
  Lattice lattice;
  std::vector<double> data;
};

std::string encode(const Snapshot& s);
Snapshot decode(const std::string& bytes);

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

Snapshot to_snapshot(const WaveField& f, int phase_d, double time = 0.0);
Snapshot to_snapshot(const RealField& f, int phase_d = 0, double time = 0.0);
Snapshot to_snapshot(const SpatialVectorField& f, double time = 0.0);
Snapshot to_snapshot(const SpatialComplexVectorField& f, double time = 0.0);

WaveField wave_field(const Snapshot& s);
RealField real_field(const Snapshot& s);
PhaseGrid phase_grid(const Snapshot& s);

}  // namespace hvp
