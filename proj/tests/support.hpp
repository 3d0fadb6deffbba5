#pragma once

// Closed forms used as independent oracles, plus small helpers shared by
// the test binaries.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "fracgs/grid.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// u*(x) = 2/(1+x^2) and its half-Laplacian.
inline double soliton(double x) { return 2.0 / (1.0 + x * x); }
inline double soliton_half_laplacian(double x) {
  const double d = 1.0 + x * x;
  return 2.0 * (1.0 - x * x) / (d * d);
}

// int_{-R}^{R} u*^2 = 4 (arctan R + R/(1+R^2)).
inline double soliton_window_mass(double R) { return 4.0 * (std::atan(R) + R / (1.0 + R * R)); }

// int_0^1 t cos(pi n t) dt.
inline double linear_cosine_moment(long n) {
  if (n == 0) return 0.5;
  const double pn = pi * static_cast<double>(n);
  return ((n % 2 == 0 ? 1.0 : -1.0) - 1.0) / (pn * pn);
}

// int_0^s t^3 e^{a t^2} dt = (e^{a s^2}(a s^2 - 1) + 1) / (2 a^2).
inline double cubic_exp_moment(double a, double s) {
  const double w = a * s * s;
  return (std::expm1(w) * (w - 1.0) + w) / (2.0 * a * a);
}

// Composite Simpson rule in long double.
inline double simpson(const std::function<long double(long double)>& g, double a, double b, int panels) {
  const long double h = (static_cast<long double>(b) - a) / panels;
  long double sum = g(a) + g(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0L : 2.0L) * g(a + i * h);
  return static_cast<double>(sum * h / 3.0L);
}

inline double sup_relative_error(const fracgs::Field& got, const std::function<double(double)>& want,
                                 double window) {
  double err = 0.0;
  double scale = 0.0;
  const auto& g = got.grid();
  for (std::size_t j = 0; j < got.size(); ++j) {
    const double x = g.x(j);
    if (std::abs(x) > window) continue;
    err = std::max(err, std::abs(got[j] - want(x)));
    scale = std::max(scale, std::abs(want(x)));
  }
  return err / scale;
}

// Sum of a few Gaussians with random centres, widths and signs.
inline fracgs::Field random_direction(const fracgs::GridSpec& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> centre(-6.0, 6.0), width(0.5, 3.0), amp(-1.0, 1.0);
  double c[3], w[3], a[3];
  for (int k = 0; k < 3; ++k) {
    c[k] = centre(rng);
    w[k] = width(rng);
    a[k] = amp(rng);
  }
  return fracgs::Field::sample(grid, [&](double x) {
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += a[k] * std::exp(-(x - c[k]) * (x - c[k]) / (2.0 * w[k] * w[k]));
    return v;
  });
}

}  // namespace oracle

namespace testutil {

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fracgs_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Exit status of a shell command, output discarded.
inline int run(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace testutil
