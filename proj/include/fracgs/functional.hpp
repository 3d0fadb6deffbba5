#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fracgs/grid.hpp"
#include "fracgs/nonlinearity.hpp"

namespace fracgs {

/// Scalar functionals of one field.
struct EnergyReport {
  double l2_sq = 0.0;
  double seminorm_sq = 0.0;
  double norm_sq = 0.0;
  double F_integral = 0.0;
  double fu_integral = 0.0;  // int f(u) u
  double J = 0.0;
  double Phi = 0.0;  // J'(u)u
  double H_integral = 0.0;
  double dual_residual = 0.0;

  /// One "key=value" line per field.
  std::string to_key_value() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// f(u_j) sampled on the grid. Throws NumericalError if any value is not
/// finite.
Field nonlinear_term(const Field& u, const Nonlinearity& nl);

/// All fields of EnergyReport, including the dual residual.
EnergyReport energy(const Field& u, const Nonlinearity& nl);

/// J(u) alone.
double functional_value(const Field& u, const Nonlinearity& nl);

/// Phi(u) = J'(u)u.
double phi(const Field& u, const Nonlinearity& nl);

/// J(v) - J(u), accurate when v is close to u: the quadratic part is
/// evaluated as a product and F(v_j) - F(u_j) as a short integral of f.
double energy_difference(const Field& u, const Field& v, const Nonlinearity& nl);

/// The unique t > 0 with Phi(t u) = 0. Throws ProjectionError when no sign
/// change of Phi(t u) is found for t in [1e-8, 1e8].
double nehari_scale(const Field& u, const Nonlinearity& nl);

struct Gradient {
  Field g;                    // Riesz representative of J'(u)
  double dual_residual = 0.0;  // ||g|| in H^{1/2}
};

Gradient sobolev_gradient(const Field& u, const Nonlinearity& nl);

/// (1/2 - 1/q) S^{2q/(q-2)} / (q C_q)^{2/(q-2)}.
double ground_energy_upper_bound(double q, double c_q, double s_q);

/// theta/(theta-2) (q-2)/q S^{2q/(q-2)} / (q C_q)^{2/(q-2)}.
double norm_sq_upper_bound(double q, double c_q, double theta, double s_q);

/// ||v|| / ||v||_{L^q}.
double sq_quotient(const Field& v, double q);

struct SqEstimate {
  double value = 0.0;
  std::string best;  // member attaining the minimum
  std::string family;
  std::vector<std::pair<double, double>> gaussian_widths;  // (width, quotient)
};

/// min of sq_quotient over centered Gaussians e^{-x^2/(2w^2)}, w log-spaced
/// on [2h, L/4] (64 members), and over the extra fields.
SqEstimate sq_estimate(const GridSpec& grid, double q, const std::vector<Field>& extra = {});

}  // namespace fracgs
