#include <doctest.h>

#include <cmath>
#include <complex>

#include "fracgs/grid.hpp"
#include "fracgs/spectral.hpp"
#include "../support.hpp"

using namespace fracgs;

namespace {
const GridSpec kWide{80.0, 4096};

Field soliton_field(const GridSpec& g) { return Field::sample(g, oracle::soliton); }
}  // namespace

TEST_CASE("grid spacing and origin") {
  GridSpec g{10.0, 100};
  CHECK(g.spacing() == doctest::Approx(0.2));
  CHECK(g.x(0) == -10.0);
  CHECK(g.x(g.origin_index()) == doctest::Approx(0.0));
  CHECK_THROWS_AS(GridSpec(10.0, 101), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(-1.0, 64), std::invalid_argument);
}

TEST_CASE("field rejects non-finite samples") {
  GridSpec g{1.0, 16};
  std::vector<double> v(16, 0.0);
  v[3] = NAN;
  CHECK_THROWS(Field(g, v));
  CHECK_THROWS(Field(g, {0.0, 0.0}));
}

TEST_CASE("zero field maps to zero") {
  for (auto b : {Boundary::whole_line, Boundary::periodic}) {
    GridSpec g{20.0, 256, b};
    const Field z = Field::zeros(g);
    CHECK(frac_laplacian(z).max_abs() == 0.0);
    CHECK(frac_laplacian(z, FracOrder::quarter).max_abs() == 0.0);
    CHECK(gagliardo_seminorm_sq(z) == 0.0);
    const Norms n = norms(z);
    CHECK(n.l2_sq == 0.0);
    CHECK(n.h_half_sq == 0.0);
  }
}

TEST_CASE("cosine is a periodic eigenfunction") {
  const double L = 10.0;
  GridSpec g{L, 256, Boundary::periodic};
  for (int k : {1, 3, 17}) {
    const double xi = oracle::pi * k / L;
    const Field u = Field::sample(g, [&](double x) { return std::cos(xi * x); });
    for (auto [order, power] : {std::pair{FracOrder::half, 1.0}, std::pair{FracOrder::quarter, 0.5}}) {
      const Field v = frac_laplacian(u, order);
      double err = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(v[j] - std::pow(xi, power) * u[j]));
      CHECK(err < 1e-12);
    }
  }
}

TEST_CASE("soliton half-Laplacian on the whole line") {
  // Relative to the sup of the target, which vanishes at |x| = 1.
  const Field v = frac_laplacian(soliton_field(kWide));
  CHECK(oracle::sup_relative_error(v, oracle::soliton_half_laplacian, 10.0) <= 1e-4);
}

TEST_CASE("periodic soliton is truncation limited") {
  GridSpec g{80.0, 4096, Boundary::periodic};
  const Field v = frac_laplacian(soliton_field(g));
  const double err = oracle::sup_relative_error(v, oracle::soliton_half_laplacian, 10.0);
  CHECK(err < 1e-2);
  CHECK(err > 1e-4);
}

TEST_CASE("singular integral") {
  const double h = kWide.spacing();
  SUBCASE("constant is annihilated") {
    // Periodic: on the whole line the samples vanish outside the box.
    const GridSpec p{80.0, 4096, Boundary::periodic};
    const Field c = Field::sample(p, [](double) { return 3.0; });
    CHECK(std::abs(frac_laplacian_singular(c, 0.0, h)) < 1e-12);
  }
  SUBCASE("soliton at the origin") {
    CHECK(frac_laplacian_singular(soliton_field(kWide), 0.0, h) == doctest::Approx(2.0).epsilon(1e-3));
  }
  SUBCASE("cosine at the origin") {
    GridSpec g{64.0 * oracle::pi, 16384, Boundary::periodic};
    const Field u = Field::sample(g, [](double x) { return std::cos(x); });
    CHECK(frac_laplacian_singular(u, 0.0, g.spacing()) == doctest::Approx(1.0).epsilon(1e-2));
  }
  SUBCASE("agrees with the spectral operator") {
    const Field u = soliton_field(kWide);
    const Field v = frac_laplacian(u);
    for (double x : {-3.0, 0.5, 2.0}) {
      const std::size_t j = static_cast<std::size_t>(std::lround((x + 80.0) / h));
      CHECK(frac_laplacian_singular(u, kWide.x(j), h) == doctest::Approx(v[j]).epsilon(2e-3));
    }
  }
}

TEST_CASE("soliton norms") {
  const Norms n = norms(soliton_field(kWide));
  CHECK(n.l2_sq == doctest::Approx(2.0 * oracle::pi).epsilon(1e-3));
  CHECK(n.seminorm_sq == doctest::Approx(oracle::pi).epsilon(1e-3));
  CHECK(n.h_half_sq == doctest::Approx(3.0 * oracle::pi).epsilon(1e-3));
  CHECK(std::pow(lp_norm(soliton_field(kWide), 3.0), 3.0) == doctest::Approx(3.0 * oracle::pi).epsilon(1e-3));
}

TEST_CASE("seminorm: spectral against the double integral") {
  GridSpec g{20.0, 2048};
  const Field u = Field::sample(g, [](double x) { return std::exp(-x * x / 2.0); });
  const double a = gagliardo_seminorm_sq(u, SeminormMethod::spectral);
  const double b = gagliardo_seminorm_sq(u, SeminormMethod::double_integral);
  CHECK(std::abs(a - b) / a <= 2e-2);
  // (1/2pi) int |xi| |u_hat|^2 with u_hat = sqrt(2pi) e^{-xi^2/2}: equals 1.
  CHECK(a == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("unitary transform preserves the discrete L2 norm") {
  GridSpec g{15.0, 512};
  const Field u = Field::sample(g, [](double x) { return std::exp(-x * x) * (1.0 + x); });
  double spec = 0.0;
  for (const auto& c : unitary_transform(u)) spec += std::norm(c);
  CHECK(spec == doctest::Approx(l2_inner(u, u)).epsilon(1e-13));
}

TEST_CASE("operators are symmetric") {
  for (auto b : {Boundary::whole_line, Boundary::periodic}) {
    GridSpec g{30.0, 1024, b};
    const Field u = Field::sample(g, [](double x) { return std::exp(-(x - 1) * (x - 1)); });
    const Field v = Field::sample(g, [](double x) { return 1.0 / (1.0 + x * x) * std::cos(x); });
    const double uv = l2_inner(frac_laplacian(u), v);
    const double vu = l2_inner(u, frac_laplacian(v));
    CHECK(uv == doctest::Approx(vu).epsilon(1e-12));
    CHECK(h_half_inner(u, v) == doctest::Approx(h_half_inner(v, u)).epsilon(1e-12));
  }
}

TEST_CASE("Riesz map inverts I + (-Delta)^{1/2}") {
  for (auto b : {Boundary::whole_line, Boundary::periodic}) {
    GridSpec g{40.0, 2048, b};
    const Field r = Field::sample(g, [](double x) { return x * std::exp(-x * x / 4.0); });
    const Field back = apply_h_half(h_half_riesz(r));
    CHECK((back - r).max_abs() <= 1e-10 * r.max_abs());
  }
}

TEST_CASE("translation is a norm-preserving permutation") {
  GridSpec g{20.0, 512, Boundary::periodic};
  const Field u = Field::sample(g, [](double x) { return std::exp(-x * x) + 0.1 * std::sin(x); });
  const Field t = translate_steps(u, 37);
  CHECK(t[100 + 37] == u[100]);
  CHECK((translate_steps(t, -37) - u).max_abs() == 0.0);
  CHECK(l2_inner(t, t) == doctest::Approx(l2_inner(u, u)).epsilon(1e-14));
  CHECK(gagliardo_seminorm_sq(t) == doctest::Approx(gagliardo_seminorm_sq(u)).epsilon(1e-12));
}

TEST_CASE("Toeplitz moments") {
  for (long n = 0; n <= 60; ++n) {
    const double want = oracle::linear_cosine_moment(n);
    CHECK(detail::toeplitz_moment(1.0, n) == doctest::Approx(want).epsilon(1e-14).scale(1e-3));
    CHECK(detail::toeplitz_moment_numeric(1.0, n) == doctest::Approx(want).epsilon(1e-10).scale(1e-3));
  }
  // mu = 1/2 against Simpson on a fine grid.
  for (long n : {0L, 1L, 5L, 12L}) {
    const double want = oracle::simpson(
        [n](long double t) { return std::sqrt(t) * std::cos(oracle::pi * n * t); }, 0.0, 1.0, 200000);
    CHECK(detail::toeplitz_moment_numeric(0.5, n) == doctest::Approx(want).epsilon(1e-6).scale(1e-2));
  }
}

TEST_CASE("boundary amplitude") {
  const Field u = soliton_field(kWide);
  CHECK(boundary_amplitude(u) == doctest::Approx(2.0 / (1.0 + 6400.0)));
}
