#include "fracgs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "fft.hpp"

namespace fracgs {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace detail {

double toeplitz_moment_numeric(double mu, long n) {
  if (n < 0) n = -n;
  if (n == 0) return 1.0 / (mu + 1.0);
  if (n < 48) {
    // t = s^2 removes the endpoint singularity of t^mu for mu < 1.
    using boost::math::quadrature::gauss;
    const double a = pi * static_cast<double>(n);
    auto integrand = [&](double s) { return 2.0 * std::pow(s, 2.0 * mu + 1.0) * std::cos(a * s * s); };
    const long panels = 4 * (n + 2);
    double sum = 0.0;
    for (long p = 0; p < panels; ++p) {
      const double lo = static_cast<double>(p) / static_cast<double>(panels);
      const double hi = static_cast<double>(p + 1) / static_cast<double>(panels);
      sum += gauss<double, 20>::integrate(integrand, lo, hi);
    }
    return sum;
  }
  // int_0^1 = int_0^inf (Abel sense) - int_1^inf; the second piece by
  // repeated integration by parts.
  const double a = pi * static_cast<double>(n);
  const cplx ia(0.0, a);
  cplx series = 0.0;
  cplx power = 1.0 / ia;
  double falling = 1.0;
  double last = INFINITY;
  for (int k = 0; k < 60; ++k) {
    const cplx term = (k % 2 == 0 ? 1.0 : -1.0) * falling * power;
    const double mag = std::abs(term);
    if (mag > last) break;
    series += term;
    if (mag < 1e-18 * std::abs(series)) break;
    last = mag;
    falling *= (mu - static_cast<double>(k));
    power /= ia;
  }
  const cplx head = std::tgamma(mu + 1.0) * std::exp(cplx(0.0, pi * (mu + 1.0) / 2.0)) * std::pow(a, -(mu + 1.0));
  return std::real(head + std::exp(cplx(0.0, a)) * series);
}

double toeplitz_moment(double mu, long n) {
  if (mu == 1.0) {
    if (n < 0) n = -n;
    if (n == 0) return 0.5;
    if (n % 2 == 0) return 0.0;
    const double a = pi * static_cast<double>(n);
    return -2.0 / (a * a);
  }
  return toeplitz_moment_numeric(mu, n);
}

}  // namespace detail

namespace {

double symbol_exponent(FracOrder order) { return order == FracOrder::half ? 1.0 : 0.5; }

// Eigenvalues of the 2N circulant embedding of the whole-line Toeplitz
// operator with h = 1; scale by h^{-mu}.
const std::vector<double>& whole_line_symbol_unit(std::size_t n, double mu) {
  static std::mutex m;
  static std::map<std::pair<std::size_t, double>, std::vector<double>> cache;
  std::lock_guard lock(m);
  auto key = std::make_pair(n, mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<double> column(2 * n, 0.0);
  const double scale = std::pow(pi, mu);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = scale * detail::toeplitz_moment(mu, static_cast<long>(k));
    column[k] = t;
    if (k > 0) column[2 * n - k] = t;
  }
  auto& dft = detail::real_dft(2 * n);
  std::vector<cplx> spec(dft.spectrum_size());
  dft.forward(column, spec);
  std::vector<double> symbol(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) symbol[k] = spec[k].real();
  return cache.emplace(key, std::move(symbol)).first->second;
}

// Symbol on the r2c spectrum used by apply_symbol: length N/2+1 (periodic)
// or N+1 (whole line).
std::vector<double> operator_symbol(const GridSpec& g, double mu) {
  if (g.boundary() == Boundary::periodic) {
    std::vector<double> s(g.size() / 2 + 1);
    const double base = pi / g.half_width();
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::pow(base * static_cast<double>(k), mu);
    return s;
  }
  const auto& unit = whole_line_symbol_unit(g.size(), mu);
  const double scale = std::pow(g.spacing(), -mu);
  std::vector<double> s(unit.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = scale * unit[k];
  return s;
}

std::size_t transform_length(const GridSpec& g) {
  return g.boundary() == Boundary::periodic ? g.size() : 2 * g.size();
}

// Applies a real even multiplier m(symbol) on the r2c spectrum.
template <class Multiplier>
std::vector<double> apply_multiplier(const GridSpec& g, std::span<const double> u, const std::vector<double>& symbol,
                                     Multiplier mult) {
  const std::size_t len = transform_length(g);
  auto& dft = detail::real_dft(len);
  std::vector<cplx> spec(dft.spectrum_size());
  dft.forward(u, spec);
  const double inv = 1.0 / static_cast<double>(len);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= mult(symbol[k]) * inv;
  std::vector<double> out(g.size());
  dft.backward(spec, out);
  return out;
}

std::vector<double> apply_frac(const GridSpec& g, std::span<const double> u, double mu) {
  const auto symbol = operator_symbol(g, mu);
  return apply_multiplier(g, u, symbol, [](double s) { return s; });
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// Sample lookup honoring the boundary convention.
double sample_at(const Field& u, std::ptrdiff_t j) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  if (u.grid().boundary() == Boundary::periodic) return u[static_cast<std::size_t>(((j % n) + n) % n)];
  if (j < 0 || j >= n) return 0.0;
  return u[static_cast<std::size_t>(j)];
}

std::size_t grid_index_of(const GridSpec& g, double x) {
  const double pos = (x + g.half_width()) / g.spacing();
  const double idx = std::round(pos);
  if (std::abs(pos - idx) > 1e-9 || idx < 0.0 || idx >= static_cast<double>(g.size()))
    throw std::invalid_argument("x must be a grid point");
  return static_cast<std::size_t>(idx);
}

}  // namespace

Field frac_laplacian(const Field& u, FracOrder order) {
  return Field(u.grid(), apply_frac(u.grid(), u.values(), symbol_exponent(order)));
}

double frac_laplacian_singular(const Field& u, double x, double cutoff) {
  const GridSpec& g = u.grid();
  const double h = g.spacing();
  if (!(cutoff > 0.0) || cutoff >= g.half_width() / 2.0)
    throw std::invalid_argument("singular integral: cutoff must lie in (0, L/2)");
  const auto j = static_cast<std::ptrdiff_t>(grid_index_of(g, x));
  const auto m_cut = std::max<std::ptrdiff_t>(1, std::llround(cutoff / h));
  const double delta = static_cast<double>(m_cut) * h;
  const double uj = u[static_cast<std::size_t>(j)];

  auto second_difference = [&](std::ptrdiff_t m) { return sample_at(u, j + m) + sample_at(u, j - m) - 2.0 * uj; };

  // |y| < delta: the integrand tends to u''(x).
  const double near = 2.0 * delta * second_difference(1) / (h * h);

  const auto n = static_cast<std::ptrdiff_t>(g.size());
  const std::ptrdiff_t m_end = g.boundary() == Boundary::periodic ? 64 * n : n;
  auto integrand = [&](std::ptrdiff_t m) {
    const double y = static_cast<double>(m) * h;
    return second_difference(m) / (y * y);
  };
  double far = 0.5 * (integrand(m_cut) + integrand(m_end));
  for (std::ptrdiff_t m = m_cut + 1; m < m_end; ++m) far += integrand(m);
  far *= 2.0 * h;

  // Beyond y_end the second difference is -2u(x) (whole line) or averages
  // to 2(mean - u(x)) (periodic).
  const double y_end = static_cast<double>(m_end) * h;
  double tail_level = -2.0 * uj;
  if (g.boundary() == Boundary::periodic) {
    double mean = 0.0;
    for (double v : u.values()) mean += v;
    mean /= static_cast<double>(n);
    tail_level = 2.0 * (mean - uj);
  }
  const double tail = 2.0 * tail_level / y_end;

  return -(near + far + tail) / (2.0 * pi);
}

double gagliardo_seminorm_sq(const Field& u, SeminormMethod method) {
  const GridSpec& g = u.grid();
  if (method == SeminormMethod::spectral) {
    const auto lu = apply_frac(g, u.values(), 1.0);
    return g.spacing() * dot(u.values(), lu);
  }

  const auto n = static_cast<std::ptrdiff_t>(g.size());
  const double h = g.spacing();
  const bool periodic = g.boundary() == Boundary::periodic;
  // Kernel 1/(x-y)^2 per index offset; summed over periodic images on the circle.
  std::vector<double> kernel(static_cast<std::size_t>(n), 0.0);
  for (std::ptrdiff_t m = 1; m < n; ++m) {
    const double md = static_cast<double>(m);
    if (periodic) {
      const double s = std::sin(pi * md / static_cast<double>(n));
      kernel[static_cast<std::size_t>(m)] = std::pow(pi / static_cast<double>(n), 2) / (h * h * s * s);
    } else {
      kernel[static_cast<std::size_t>(m)] = 1.0 / (md * md * h * h);
    }
  }

  double off_diag = 0.0;
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const double uj = u[static_cast<std::size_t>(j)];
    double row = 0.0;
    if (periodic) {
      for (std::ptrdiff_t m = 1; m < n; ++m) {
        const double d = uj - u[static_cast<std::size_t>((j + m) % n)];
        row += d * d * kernel[static_cast<std::size_t>(m)];
      }
    } else {
      for (std::ptrdiff_t l = 0; l < n; ++l) {
        if (l == j) continue;
        const double d = uj - u[static_cast<std::size_t>(l)];
        row += d * d * kernel[static_cast<std::size_t>(std::abs(l - j))];
      }
    }
    off_diag += row;
  }
  off_diag *= h * h;

  // Diagonal cells: the integrand tends to u'(x)^2, estimated from the two
  // adjacent slopes.
  double diag = 0.0;
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const double fwd = sample_at(u, j + 1) - u[static_cast<std::size_t>(j)];
    const double bwd = u[static_cast<std::size_t>(j)] - sample_at(u, j - 1);
    diag += 0.5 * (fwd * fwd + bwd * bwd);
  }

  // Whole line: pairs with one point outside the box, where u = 0.
  double outside = 0.0;
  if (!periodic) {
    const double left = -g.half_width() - 0.5 * h;
    const double right = g.half_width() - 0.5 * h;
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      const double xj = g.x(static_cast<std::size_t>(j));
      const double uj = u[static_cast<std::size_t>(j)];
      outside += uj * uj * (1.0 / (xj - left) + 1.0 / (right - xj));
    }
    outside *= 2.0 * h;
  }

  return (off_diag + diag + outside) / (2.0 * pi);
}

Norms norms(const Field& u) {
  Norms out;
  out.l2_sq = u.grid().spacing() * dot(u.values(), u.values());
  out.seminorm_sq = gagliardo_seminorm_sq(u, SeminormMethod::spectral);
  out.h_half_sq = out.l2_sq + out.seminorm_sq;
  return out;
}

double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double v : u.values()) s += std::pow(std::abs(v), p);
  return std::pow(u.grid().spacing() * s, 1.0 / p);
}

std::vector<cplx> unitary_transform(const Field& u) {
  const std::size_t n = u.size();
  auto& dft = detail::real_dft(n);
  std::vector<cplx> half(dft.spectrum_size());
  dft.forward(u.values(), half);
  const double scale = std::sqrt(u.grid().spacing() / static_cast<double>(n));
  std::vector<cplx> full(n);
  for (std::size_t k = 0; k < n; ++k) {
    full[k] = k < half.size() ? half[k] : std::conj(half[n - k]);
    full[k] *= scale;
  }
  return full;
}

double l2_inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  return u.grid().spacing() * dot(u.values(), v.values());
}

double h_half_inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  const auto av = apply_h_half(v);
  return u.grid().spacing() * dot(u.values(), av.values());
}

Field apply_h_half(const Field& u) {
  auto lu = apply_frac(u.grid(), u.values(), 1.0);
  for (std::size_t j = 0; j < lu.size(); ++j) lu[j] += u[j];
  return Field(u.grid(), std::move(lu));
}

Field h_half_riesz(const Field& r) {
  const GridSpec& g = r.grid();
  const auto symbol = operator_symbol(g, 1.0);
  auto precondition = [&](std::span<const double> v) {
    return apply_multiplier(g, v, symbol, [](double s) { return 1.0 / (1.0 + s); });
  };
  if (g.boundary() == Boundary::periodic) return Field(g, precondition(r.values()));

  // Preconditioned CG on I + T, preconditioner P (I + C)^{-1} P^T with C the
  // circulant embedding of T.
  const std::size_t n = g.size();
  auto apply_a = [&](std::span<const double> v) {
    auto out = apply_multiplier(g, v, symbol, [](double s) { return s; });
    for (std::size_t j = 0; j < n; ++j) out[j] += v[j];
    return out;
  };
  std::vector<double> x(n, 0.0);
  std::vector<double> res(r.values().begin(), r.values().end());
  const double b_norm = std::sqrt(dot(res, res));
  if (b_norm == 0.0) return Field(g, std::move(x));
  auto z = precondition(res);
  std::vector<double> p = z;
  double rz = dot(res, z);
  for (int it = 0; it < 500; ++it) {
    const auto ap = apply_a(p);
    const double alpha = rz / dot(p, ap);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] += alpha * p[j];
      res[j] -= alpha * ap[j];
    }
    if (std::sqrt(dot(res, res)) <= 1e-14 * b_norm) break;
    z = precondition(res);
    const double rz_next = dot(res, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t j = 0; j < n; ++j) p[j] = z[j] + beta * p[j];
  }
  return Field(g, std::move(x));
}

double boundary_amplitude(const Field& u) { return std::max(std::abs(u[0]), std::abs(u[u.size() - 1])); }

}  // namespace fracgs
