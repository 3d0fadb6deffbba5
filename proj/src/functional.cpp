#include "fracgs/functional.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "fracgs/errors.hpp"
#include "fracgs/field_io.hpp"
#include "fracgs/spectral.hpp"

namespace fracgs {

namespace {

[[noreturn]] void overflow(const char* what, double amplitude) {
  std::ostringstream os;
  os << what << " is not finite at amplitude " << format_double(amplitude);
  throw NumericalError(os.str(), amplitude);
}

double checked_F(const Nonlinearity& nl, double s) {
  const double v = nl.eval_F(s);
  if (!std::isfinite(v)) overflow("F(u)", std::abs(s));
  return v;
}

double checked_f(const Nonlinearity& nl, double s) {
  const double v = nl.eval_f(s);
  if (!std::isfinite(v)) overflow("f(u)", std::abs(s));
  return v;
}

double sum_F(const Field& u, const Nonlinearity& nl) {
  double s = 0.0;
  for (double v : u.values()) s += checked_F(nl, v);
  return u.grid().spacing() * s;
}

double sum_fu(const Field& u, const Nonlinearity& nl) {
  double s = 0.0;
  for (double v : u.values()) s += checked_f(nl, v) * v;
  return u.grid().spacing() * s;
}

// F(b) - F(a) for nearby a, b by 3-point Gauss-Legendre on f.
double primitive_increment(const Nonlinearity& nl, double a, double b) {
  const double d = b - a;
  if (std::abs(d) >= 1e-2) return checked_F(nl, b) - checked_F(nl, a);
  static const std::array<double, 3> node = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const std::array<double, 3> weight = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += weight[i] * checked_f(nl, mid + 0.5 * d * node[i]);
  return 0.5 * d * s;
}

}  // namespace

std::string EnergyReport::to_key_value() const {
  std::ostringstream os;
  os << "l2_sq=" << format_double(l2_sq) << "\n"
     << "seminorm_sq=" << format_double(seminorm_sq) << "\n"
     << "norm_sq=" << format_double(norm_sq) << "\n"
     << "F_integral=" << format_double(F_integral) << "\n"
     << "fu_integral=" << format_double(fu_integral) << "\n"
     << "J=" << format_double(J) << "\n"
     << "Phi=" << format_double(Phi) << "\n"
     << "H_integral=" << format_double(H_integral) << "\n"
     << "dual_residual=" << format_double(dual_residual) << "\n";
  return os.str();
}

std::string EnergyReport::csv_header() {
  return "l2_sq,seminorm_sq,norm_sq,F_integral,fu_integral,J,Phi,H_integral,dual_residual";
}

std::string EnergyReport::csv_row() const {
  std::ostringstream os;
  os << format_double(l2_sq) << ',' << format_double(seminorm_sq) << ',' << format_double(norm_sq) << ','
     << format_double(F_integral) << ',' << format_double(fu_integral) << ',' << format_double(J) << ','
     << format_double(Phi) << ',' << format_double(H_integral) << ',' << format_double(dual_residual);
  return os.str();
}

Field nonlinear_term(const Field& u, const Nonlinearity& nl) {
  std::vector<double> v(u.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = checked_f(nl, u[j]);
  return Field(u.grid(), std::move(v));
}

EnergyReport energy(const Field& u, const Nonlinearity& nl) {
  EnergyReport r;
  const Norms n = norms(u);
  r.l2_sq = n.l2_sq;
  r.seminorm_sq = n.seminorm_sq;
  r.norm_sq = n.h_half_sq;
  r.F_integral = sum_F(u, nl);
  r.fu_integral = sum_fu(u, nl);
  r.J = 0.5 * r.norm_sq - r.F_integral;
  r.Phi = r.norm_sq - r.fu_integral;
  double h = 0.0;
  for (double v : u.values()) h += hfun(nl, v);
  r.H_integral = u.grid().spacing() * h;
  r.dual_residual = sobolev_gradient(u, nl).dual_residual;
  return r;
}

double functional_value(const Field& u, const Nonlinearity& nl) {
  return 0.5 * norms(u).h_half_sq - sum_F(u, nl);
}

double phi(const Field& u, const Nonlinearity& nl) { return norms(u).h_half_sq - sum_fu(u, nl); }

double energy_difference(const Field& u, const Field& v, const Nonlinearity& nl) {
  require_same_grid(u, v);
  // (||v||^2 - ||u||^2)/2 = <v - u, (I + T)(v + u)>/2 with T symmetric.
  const Field diff = v - u;
  const double quad = 0.5 * h_half_inner(diff, v + u);
  double dF = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) dF += primitive_increment(nl, u[j], v[j]);
  return quad - u.grid().spacing() * dF;
}

double nehari_scale(const Field& u, const Nonlinearity& nl) {
  if (u.is_zero()) throw std::invalid_argument("nehari_scale: u must be nonzero");
  const double norm_sq = norms(u).h_half_sq;
  const double h = u.grid().spacing();
  // g(t) = int f(tu) u / t - ||u||^2 increases in t and has the sign of
  // -Phi(tu).
  auto g = [&](double t) {
    double s = 0.0;
    for (double v : u.values()) s += nl.eval_f(t * v) * v;
    const double val = h * s / t - norm_sq;
    return std::isfinite(val) ? val : std::numeric_limits<double>::max();
  };
  constexpr double t_min = 1e-8, t_max = 1e8;
  double lo = 1.0, hi = 1.0;
  double g_lo = g(1.0), g_hi = g_lo;
  if (g_lo == 0.0) return 1.0;
  int steps = 0;
  if (g_lo < 0.0) {
    while (g_hi < 0.0) {
      lo = hi;
      g_lo = g_hi;
      hi *= 2.0;
      if (hi > t_max || ++steps > 60) throw ProjectionError("nehari_scale: no sign change of Phi(tu) up to t = 1e8");
      g_hi = g(hi);
    }
  } else {
    while (g_lo > 0.0) {
      hi = lo;
      g_hi = g_lo;
      lo *= 0.5;
      if (lo < t_min || ++steps > 60) throw ProjectionError("nehari_scale: no sign change of Phi(tu) down to t = 1e-8");
      g_lo = g(lo);
    }
  }
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  boost::uintmax_t iters = 200;
  const auto [a, b] =
      boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(45), iters);
  return 0.5 * (a + b);
}

Gradient sobolev_gradient(const Field& u, const Nonlinearity& nl) {
  const Field au = apply_h_half(u);
  const Field fu = nonlinear_term(u, nl);
  const Field r = au - fu;
  Field g = h_half_riesz(r);
  const double pairing = l2_inner(g, r);
  return {std::move(g), std::sqrt(std::max(0.0, pairing))};
}

double ground_energy_upper_bound(double q, double c_q, double s_q) {
  if (!(q > 2.0) || !(c_q > 0.0) || !(s_q > 0.0))
    throw std::invalid_argument("ground_energy_upper_bound: need q > 2, C_q > 0, S_q > 0");
  return (0.5 - 1.0 / q) * std::pow(s_q, 2.0 * q / (q - 2.0)) / std::pow(q * c_q, 2.0 / (q - 2.0));
}

double norm_sq_upper_bound(double q, double c_q, double theta, double s_q) {
  if (!(theta > 2.0)) throw std::invalid_argument("norm_sq_upper_bound: need theta > 2");
  if (!(q > 2.0) || !(c_q > 0.0) || !(s_q > 0.0))
    throw std::invalid_argument("norm_sq_upper_bound: need q > 2, C_q > 0, S_q > 0");
  return theta / (theta - 2.0) * (q - 2.0) / q * std::pow(s_q, 2.0 * q / (q - 2.0)) /
         std::pow(q * c_q, 2.0 / (q - 2.0));
}

double sq_quotient(const Field& v, double q) {
  if (v.is_zero()) throw std::invalid_argument("sq_quotient: v must be nonzero");
  if (!(q > 2.0)) throw std::invalid_argument("sq_quotient: need q > 2");
  return std::sqrt(norms(v).h_half_sq) / lp_norm(v, q);
}

SqEstimate sq_estimate(const GridSpec& grid, double q, const std::vector<Field>& extra) {
  SqEstimate est;
  est.family = "centered gaussians exp(-x^2/(2w^2)), 64 widths log-spaced on [2h, L/4]";
  est.value = std::numeric_limits<double>::infinity();
  const double w0 = 2.0 * grid.spacing(), w1 = grid.half_width() / 4.0;
  constexpr int count = 64;
  for (int i = 0; i < count; ++i) {
    const double w = w0 * std::pow(w1 / w0, static_cast<double>(i) / (count - 1));
    const Field g = Field::sample(grid, [w](double x) { return std::exp(-x * x / (2.0 * w * w)); });
    const double s = sq_quotient(g, q);
    est.gaussian_widths.emplace_back(w, s);
    if (s < est.value) {
      est.value = s;
      est.best = "gaussian(w=" + format_double(w) + ")";
    }
  }
  for (std::size_t i = 0; i < extra.size(); ++i) {
    const double s = sq_quotient(extra[i], q);
    if (s < est.value) {
      est.value = s;
      est.best = "extra[" + std::to_string(i) + "]";
    }
  }
  return est;
}

}  // namespace fracgs
