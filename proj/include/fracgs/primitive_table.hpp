#pragma once

#include <functional>
#include <vector>

namespace fracgs {

/// F(s) = int_0^s f for odd f, tabulated on [0, s_max] and evaluated by
/// quintic Hermite interpolation from (F, f, f') at the nodes. Node values
/// accumulate a 10-point Gauss rule per interval; |s| below the first node
/// uses the same rule and |s| above s_max adds adaptive Gauss-Kronrod.
/// Immutable after construction.
class PrimitiveTable {
public:
  PrimitiveTable(std::function<double(double)> f, std::function<double(double)> fprime, double s_max,
                 std::size_t intervals = 2048);

  double operator()(double s) const;
  double s_max() const noexcept { return s_max_; }

private:
  double integrate(double a, double b) const;

  std::function<double(double)> f_;
  std::function<double(double)> fprime_;
  double s_max_;
  double step_;
  std::vector<double> F_;
  std::vector<double> f_nodes_;
  std::vector<double> fp_nodes_;
};

}  // namespace fracgs
