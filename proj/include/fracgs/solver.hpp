#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracgs/functional.hpp"
#include "fracgs/grid.hpp"
#include "fracgs/nonlinearity.hpp"

namespace fracgs {

enum class InitKind { gaussian, bump, file };
const char* to_string(InitKind k) noexcept;

struct SolveConfig {
  GridSpec grid{80.0, 4096};
  BuiltinSpec nl = PurePower{2.0};

  InitKind init = InitKind::gaussian;
  double init_width = 2.0;
  double init_amplitude = 0.0;  // 0: scale the shape onto the Nehari manifold
  std::filesystem::path init_file;
  double perturbation = 0.0;  // relative random perturbation of the initial shape
  std::uint64_t seed = 0;

  double step = 1.0;
  double shrink = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 60;

  double tol_residual = 1e-8;
  int max_iters = 500;
  int recenter_every = 10;  // 0 disables recentering
  double recenter_radius = 5.0;
  double rho0 = 1.0;
  double gamma = 1e-3;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

enum class Termination { converged, max_iters, overflow, projection_failure, line_search_stalled };
const char* to_string(Termination t) noexcept;

struct TraceRow {
  int iter = 0;
  double J = 0.0;
  double phi_before = 0.0;  // Phi before the projection that produced this iterate
  double t0 = 1.0;
  double residual = 0.0;
  double shift = 0.0;
  double norm = 0.0;
  double dJ = 0.0;  // J change from the previous iterate (0 on the first row)
  double window_mass = 0.0;  // max windowed L^2 mass, radius recenter_radius
};

struct SolveTrace {
  std::vector<TraceRow> rows;
  Termination termination = Termination::max_iters;
  std::string message;
  int iterations = 0;  // accepted steps
  double min_norm = 0.0;
  double max_norm = 0.0;

  /// CSV "iter,J,phi,t0,residual,shift,norm".
  void write_csv(std::ostream& out) const;
  void write_csv(const std::filesystem::path& path) const;
};

struct SolveResult {
  Field u;
  std::optional<EnergyReport> report;  // absent if the final field cannot be evaluated
  SolveTrace trace;
  // Phi on the average of the last iterates and the splitting defect
  // Phi(u) - Phi(u - u_avg) - Phi(u_avg).
  double phi_tail_average = 0.0;
  double splitting_defect = 0.0;
};

/// The initial field described by cfg, before any projection.
Field initial_field(const SolveConfig& cfg);

/// Nehari-constrained Sobolev gradient descent with Armijo backtracking.
SolveResult solve(const SolveConfig& cfg);

struct Recentered {
  Field u;
  double shift = 0.0;  // applied translation; u_new(x) = u(x - shift)
  std::ptrdiff_t steps = 0;
};

/// Windowed L^2 mass int_{y-R}^{y+R} u^2 at every grid center y_c (trapezoid
/// ends; the window wraps on periodic grids and is clipped on the whole line).
std::vector<double> windowed_masses(const Field& u, double radius);

/// Moves the center of the heaviest window of radius R to x = 0 by a whole
/// grid rotation. Ties (relative 1e-12) go to the smallest |y|.
Recentered recenter(const Field& u, double radius);

struct VanishingReport {
  bool non_vanishing = false;
  double min_mass = 0.0;  // over the trace and the final field
  double final_mass = 0.0;
  double gamma = 0.0;
};

VanishingReport vanishing_monitor(const SolveTrace& trace, const Field& u, double radius, double gamma);

}  // namespace fracgs
