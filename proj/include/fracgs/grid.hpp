#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracgs {

/// How samples outside [-L, L) are interpreted.
///
/// whole_line: the field is the band-limited interpolant of its samples and
/// vanishes outside the box; operators act as on R.
/// periodic: the field is 2L-periodic; operators are Fourier multipliers on
/// the discrete circle.
enum class Boundary { whole_line, periodic };

const char* to_string(Boundary b) noexcept;

/// Uniform grid x_j = -L + j h, j = 0..N-1, h = 2L/N.
class GridSpec {
public:
  GridSpec(double half_width, std::size_t n_points, Boundary boundary = Boundary::whole_line);

  double half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  Boundary boundary() const noexcept { return boundary_; }

  double x(std::size_t j) const noexcept { return -half_width_ + h_ * static_cast<double>(j); }
  std::vector<double> points() const;

  /// Index of the sample at x = 0.
  std::size_t origin_index() const noexcept { return n_ / 2; }

  /// xi_k = pi k / L in FFT order: k = 0..N/2-1 followed by -N/2..-1.
  std::vector<double> wavenumbers() const;

  bool operator==(const GridSpec&) const = default;

private:
  double half_width_;
  std::size_t n_;
  double h_;
  Boundary boundary_;
};

/// Real samples of a function on a GridSpec. Immutable once built; every
/// sample is finite.
class Field {
public:
  Field(GridSpec grid, std::vector<double> values);

  static Field zeros(const GridSpec& grid);
  static Field sample(const GridSpec& grid, const std::function<double(double)>& fn);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const noexcept { return values_[j]; }

  double max_abs() const noexcept;
  bool is_zero() const noexcept;
  Field scaled(double c) const;

  friend Field operator+(const Field& a, const Field& b);
  friend Field operator-(const Field& a, const Field& b);
  friend Field operator*(double c, const Field& a) { return a.scaled(c); }

private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Throws std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b);

/// result[j] = u[j - steps] with periodic index wrap, i.e. u translated by
/// steps * h. A permutation of the samples.
Field translate_steps(const Field& u, std::ptrdiff_t steps);

/// Rectangle-rule integral h * sum_j values[j].
double integrate(const GridSpec& grid, std::span<const double> values);

}  // namespace fracgs
