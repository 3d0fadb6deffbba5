#include "fracgs/primitive_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracgs {

PrimitiveTable::PrimitiveTable(std::function<double(double)> f, std::function<double(double)> fprime, double s_max,
                               std::size_t intervals)
    : f_(std::move(f)), fprime_(std::move(fprime)), s_max_(s_max), step_(s_max / static_cast<double>(intervals)) {
  if (!(s_max > 0.0) || intervals < 2) throw std::invalid_argument("primitive table: bad range");
  F_.resize(intervals + 1);
  f_nodes_.resize(intervals + 1);
  fp_nodes_.resize(intervals + 1);
  double acc = 0.0;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double s = step_ * static_cast<double>(i);
    if (i > 0) acc += boost::math::quadrature::gauss<double, 10>::integrate(f_, s - step_, s);
    F_[i] = acc;
    f_nodes_[i] = f_(s);
    fp_nodes_[i] = fprime_(s);
  }
}

double PrimitiveTable::integrate(double a, double b) const {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(f_, a, b, 10, 1e-13);
}

double PrimitiveTable::operator()(double s) const {
  const double a = std::abs(s);
  if (a == 0.0) return 0.0;
  if (a < step_) return boost::math::quadrature::gauss<double, 10>::integrate(f_, 0.0, a);
  if (a >= s_max_) {
    if (a == s_max_) return F_.back();
    return F_.back() + integrate(s_max_, a);
  }
  const auto i = std::min(static_cast<std::size_t>(a / step_), F_.size() - 2);
  const double t = (a - step_ * static_cast<double>(i)) / step_;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
  const double h3 = 0.5 * (t3 - 2.0 * t4 + t5);
  const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  const double d = step_;
  return F_[i] * h0 + d * f_nodes_[i] * h1 + d * d * fp_nodes_[i] * h2 + d * d * fp_nodes_[i + 1] * h3 +
         d * f_nodes_[i + 1] * h4 + F_[i + 1] * h5;
}

}  // namespace fracgs
