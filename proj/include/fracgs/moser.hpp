#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracgs/grid.hpp"

namespace fracgs {

/// h sum (e^{alpha u_j^2} - 1) via expm1. Throws NumericalError when a node
/// overflows.
double moser_integral(const Field& u, double alpha);

enum class TrialFamily { gaussian, bump, log_profile };
const char* to_string(TrialFamily f) noexcept;
TrialFamily trial_family_from_string(const std::string& name);

/// Member of a trial family: amplitude a times the shape, rescaled so the
/// seminorm is min(1, seminorm).
///
/// gaussian: e^{-x^2/(2w^2)}; bump: e^{1 - 1/(1 - (x/w)^2)} on |x| < w;
/// log_profile: 1 on |x| <= w, log(1/|x|)/log(1/w) on w < |x| < 1, else 0.
/// Concentration grows as w shrinks.
Field trial_field(const GridSpec& grid, TrialFamily family, double width, double amplitude);

struct MoserTrial {
  int id = 0;
  double width = 0.0;
  double amplitude = 0.0;  // before the seminorm rescale
  bool concentration = false;  // member of the concentration ladder
  bool skipped = false;  // overflow
  double seminorm_sq = 0.0;
  double l2_sq = 0.0;
  double integral = 0.0;
  double ratio = 0.0;
};

struct MoserProbe {
  double alpha = 0.0;
  TrialFamily family = TrialFamily::gaussian;
  std::string description;
  std::vector<MoserTrial> trials;
  std::size_t skipped = 0;
  double sup_ratio = 0.0;  // lower estimate of H_alpha
  // Concentration ladder: is the ratio nondecreasing, and the last
  // d log(ratio) / d log(1/w).
  bool concentration_nondecreasing = true;
  double concentration_rate = 0.0;
  std::string trend;  // "saturating", "growing", "decreasing" or "n/a"

  /// CSV "trial_id,alpha,seminorm_sq,l2_sq,integral,ratio" (skipped trials omitted).
  void write_csv(std::ostream& out) const;
  std::string summary() const;
};

/// Empirical sup of int(e^{alpha u^2}-1)/||u||_2^2 over the family. The first
/// half of the budget is an amplitude ladder (0.01 to 1 times the unit-seminorm
/// amplitude) at width L/16; the rest is a concentration ladder at unit
/// seminorm with width from L/16 down to 4h.
MoserProbe probe_H(const GridSpec& grid, double alpha, TrialFamily family, int budget);

struct LambdaBoundReport {
  bool applicable = false;  // ||u|| <= rho0
  double norm = 0.0;
  double lhs = 0.0;  // int(e^{alpha u^2} - 1)
  double rhs = 0.0;  // same for rho0 u / ||u||
  double slack = 0.0;
  bool holds = false;
};

LambdaBoundReport lambda_bound_check(const Field& u, double alpha, double rho0);

}  // namespace fracgs
