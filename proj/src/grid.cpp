#include "fracgs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fracgs {

const char* to_string(Boundary b) noexcept {
  switch (b) {
    case Boundary::whole_line: return "whole_line";
    case Boundary::periodic: return "periodic";
  }
  return "?";
}

GridSpec::GridSpec(double half_width, std::size_t n_points, Boundary boundary)
    : half_width_(half_width), n_(n_points), h_(0.0), boundary_(boundary) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid: half-width L must be positive and finite");
  if (n_points < 16 || n_points % 2 != 0)
    throw std::invalid_argument("grid: point count N must be even and at least 16");
  h_ = 2.0 * half_width_ / static_cast<double>(n_);
}

std::vector<double> GridSpec::points() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

std::vector<double> GridSpec::wavenumbers() const {
  std::vector<double> xi(n_);
  const double base = std::numbers::pi / half_width_;
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  for (std::size_t k = 0; k < n_; ++k) {
    auto kk = static_cast<std::ptrdiff_t>(k);
    if (kk >= half) kk -= static_cast<std::ptrdiff_t>(n_);
    xi[k] = base * static_cast<double>(kk);
  }
  return xi;
}

Field::Field(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    std::ostringstream msg;
    msg << "field: expected " << grid_.size() << " samples, got " << values_.size();
    throw std::invalid_argument(msg.str());
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j])) {
      std::ostringstream msg;
      msg << "field: non-finite sample " << values_[j] << " at x = " << grid_.x(j);
      throw std::invalid_argument(msg.str());
    }
  }
}

Field Field::zeros(const GridSpec& grid) { return Field(grid, std::vector<double>(grid.size(), 0.0)); }

Field Field::sample(const GridSpec& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.x(j));
  return Field(grid, std::move(v));
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

Field Field::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return Field(grid_, std::move(v));
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + b[j];
  return Field(a.grid(), std::move(v));
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] - b[j];
  return Field(a.grid(), std::move(v));
}

Field translate_steps(const Field& u, std::ptrdiff_t steps) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  std::vector<double> v(u.size());
  const std::ptrdiff_t s = ((steps % n) + n) % n;
  for (std::ptrdiff_t j = 0; j < n; ++j) v[static_cast<std::size_t>((j + s) % n)] = u[static_cast<std::size_t>(j)];
  return Field(u.grid(), std::move(v));
}

double integrate(const GridSpec& grid, std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return grid.spacing() * sum;
}

}  // namespace fracgs
