#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracgs/grid.hpp"
#include "fracgs/nonlinearity.hpp"

namespace fracgs {

/// G in the splitting experiments: f(s)s, F(s) or H(s).
enum class SplitFunctional { fu, F, H };
const char* to_string(SplitFunctional g) noexcept;

/// h sum G(u_j).
double integral_of(const Field& u, const Nonlinearity& nl, SplitFunctional g);

/// With u_n = u + w(. - d h): |int G(u_n) - int G(w(. - d h)) - int G(u)|.
/// The translation is a whole-step rotation of w's samples. The sum is
/// taken node by node so that disjoint supports give exactly zero.
double brezis_lieb_defect(const Field& u, const Field& w, std::ptrdiff_t d_steps, const Nonlinearity& nl,
                          SplitFunctional g);

struct SplitRow {
  double d = 0.0;
  SplitFunctional functional = SplitFunctional::fu;
  double defect = 0.0;
  double defect_normalized = 0.0;  // defect / ||u_n||^2
};

struct SplitExperiment {
  std::vector<double> separations;  // increasing, whole grid steps
  std::vector<SplitRow> rows;       // ordered by separation, then functional
  std::vector<double> norm_sq;      // ||u_n||^2 per separation
  double max_norm = 0.0;            // max ||u_n|| (compare with rho0)

  /// Normalized defects strictly decrease along the separations for every functional.
  bool monotone() const;
  /// Largest normalized defect at the last separation.
  double final_normalized() const;
  /// H-defect <= fu-defect + 2 F-defect at every separation.
  bool triangle_bound() const;

  /// CSV "d,functional,defect,defect_normalized".
  void write_csv(std::ostream& out) const;
};

/// Separations are lengths; each must be a whole multiple of h.
SplitExperiment run_split_experiment(const Field& u, const Field& w, const std::vector<double>& separations,
                                     const Nonlinearity& nl);

struct EnvelopeCheck {
  std::string name;     // "F", "G", "f", "fprime_s"
  bool holds = true;
  double min_D = 0.0;   // smallest D making the envelope hold on the sample
  std::size_t unevaluated = 0;  // sample points where a side overflowed
  std::vector<Witness> witnesses;  // (s, lhs - rhs) for violations
};

struct EnvelopeReport {
  double alpha = 0.0;
  double D = 0.0;
  double q = 0.0;
  std::string sample;
  std::vector<EnvelopeCheck> checks;
  bool all_hold() const;
};

/// F, G = f(s)s <= (s^2 + e^{alpha s^2} - 1) + D|s|^q and
/// |f|, |f'(s)s| <= (|s| + e^{alpha s^2} - 1) + D|s|^{q-1} on the sample.
EnvelopeReport growth_envelope_check(const Nonlinearity& nl, double alpha, double D, double q, const Sample& sample);

struct SplittingIdentity {
  double total = 0.0;       // |Phi(u_n) - Phi(v_n) - Phi(u)|
  double local = 0.0;       // |int f(u_n)u_n - int f(v_n)v_n - int f(u)u|
  double norm_part = 0.0;   // ||u_n||^2 - ||v_n||^2 - ||u||^2 = 2<u, v_n>
  double norm_sq = 0.0;     // ||u_n||^2
};

SplittingIdentity splitting_identity_check(const Field& u, const Field& w, std::ptrdiff_t d_steps,
                                           const Nonlinearity& nl);

}  // namespace fracgs
