#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hvp/interaction.hpp"
#include "hvp/lattice.hpp"
#include "hvp/profile.hpp"
#include "hvp/solver.hpp"

namespace hvp {

struct DiagnosticsConfig {
  std::vector<double> rho_p{2.75};
  std::vector<double> moment_k{2.0, 4.5};
  double gauge_c = 0.5;
};

struct OutputConfig {
  std::string dir = "out";
  std::string csv = "run.csv";
  int dump_every = 0;
};

// Config file: '#' comments, "[section]" headers, "key = value" lines.
// Keys may also be written fully qualified ("grid.nx = 8") outside a
// section. Per-axis lists take d values or a single value for all axes.
struct RunConfig {
  GridConfig grid;
  KernelKind kernel_kind = KernelKind::Newtonian;
  double coupling = 1.0;
  double epsilon = 0.0;
  ConvMethod conv = ConvMethod::Fft;
  AnalyticProfile profile;
  SolverConfig solver;
  double radius_max = -1.0;          // <0: half box diagonal
  std::uint64_t norm_budget_mb = 512;
  DiagnosticsConfig diagnostics;
  OutputConfig output;
  std::uint64_t seed = 0;

  InteractionKernel kernel() const { return make_kernel(kernel_kind, grid.d, coupling, epsilon); }
  // Radius set for the A-norm on `phase`, truncated to the memory budget.
  std::vector<double> radius_set(const Lattice& phase) const;
};

// Throws ParseError (syntax, with line:column) or ValidationError listing
// every violation.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);
std::string dump_config(const RunConfig& c);

// Valid key names, fully qualified.
std::vector<std::string> config_keys();
std::string nearest_key(const std::string& key);

// Grid, kernel, solver and radius set wired together from one config.
struct Setup {
  PhaseGrid grid;
  InteractionKernel kernel;
  SolverConfig solver;
};
Setup make_setup(const RunConfig& c);

}  // namespace hvp
