#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fracgs/errors.hpp"
#include "fracgs/functional.hpp"
#include "fracgs/spectral.hpp"
#include "../support.hpp"

using namespace fracgs;

namespace {
const GridSpec kWide{80.0, 4096};

Field soliton_field() { return Field::sample(kWide, oracle::soliton); }
Field gaussian(const GridSpec& g, double a, double w) {
  return Field::sample(g, [=](double x) { return a * std::exp(-x * x / (2 * w * w)); });
}
}  // namespace

TEST_CASE("soliton energy") {
  const EnergyReport r = energy(soliton_field(), make_builtin(PurePower{2.0}));
  CHECK(r.J == doctest::Approx(oracle::pi / 2.0).epsilon(1e-3));
  CHECK(std::abs(r.Phi) <= 1e-6 * r.norm_sq);
  CHECK(r.H_integral == doctest::Approx(oracle::pi).epsilon(1e-3));
  CHECK(r.F_integral == doctest::Approx(oracle::pi).epsilon(1e-3));
  CHECK(r.fu_integral == doctest::Approx(3.0 * oracle::pi).epsilon(1e-3));
  CHECK(r.dual_residual <= 5e-3);
}

TEST_CASE("zero field") {
  const Nonlinearity nl = make_builtin(PaperCritical{});
  const Field z = Field::zeros(kWide);
  const EnergyReport r = energy(z, nl);
  CHECK(r.J == 0.0);
  CHECK(r.Phi == 0.0);
  CHECK(r.norm_sq == 0.0);
  CHECK(r.H_integral == 0.0);
  const Gradient g = sobolev_gradient(z, nl);
  CHECK(g.g.max_abs() == 0.0);
  CHECK(g.dual_residual == 0.0);
  CHECK_THROWS_AS(nehari_scale(z, nl), std::invalid_argument);
}

TEST_CASE("Nehari scale of the soliton") {
  const Nonlinearity nl = make_builtin(PurePower{2.0});
  CHECK(nehari_scale(soliton_field(), nl) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(nehari_scale(2.0 * soliton_field(), nl) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("quadratic f: t0 = ||v||^2 / int |v|^3") {
  const Nonlinearity nl = make_builtin(PurePower{2.0});
  GridSpec g{30.0, 1024};
  const Field v = gaussian(g, 0.7, 1.5);
  const double want = norms(v).h_half_sq / std::pow(lp_norm(v, 3.0), 3.0);
  CHECK(nehari_scale(v, nl) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("projection is idempotent and maximises J on the ray") {
  GridSpec g{40.0, 1024};
  for (const BuiltinSpec& spec : std::vector<BuiltinSpec>{PurePower{2.0}, PaperCritical{}, ExpPower{1.0, 2.0}}) {
    const Nonlinearity nl = make_builtin(spec);
    CAPTURE(nl.describe());
    const Field u = gaussian(g, 0.3, 2.0);
    const double t0 = nehari_scale(u, nl);
    const Field p = t0 * u;
    CHECK(nehari_scale(p, nl) == doctest::Approx(1.0).epsilon(1e-9));
    const EnergyReport r = energy(p, nl);
    CHECK(std::abs(r.Phi) <= 1e-10 * r.norm_sq);
    CHECK(r.J == doctest::Approx(0.5 * r.H_integral).epsilon(1e-10));
    for (int k = 0; k < 100; ++k) {
      const double t = t0 / 10.0 * std::pow(100.0, k / 99.0);
      CHECK(functional_value(t * u, nl) <= r.J * (1 + 1e-14));
    }
  }
}

TEST_CASE("gradient matches directional derivatives") {
  GridSpec g{40.0, 1024};
  std::mt19937_64 rng(20240601);
  for (const BuiltinSpec& spec : std::vector<BuiltinSpec>{PurePower{2.0}, PaperCritical{}}) {
    const Nonlinearity nl = make_builtin(spec);
    const Field u = gaussian(g, 0.8, 1.7);
    const Gradient grad = sobolev_gradient(u, nl);
    for (int k = 0; k < 20; ++k) {
      const Field v = oracle::random_direction(g, rng);
      const double eps = 1e-5;
      const double fd = (functional_value(u + eps * v, nl) - functional_value(u - eps * v, nl)) / (2 * eps);
      CHECK(h_half_inner(grad.g, v) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("energy difference agrees with direct evaluation") {
  const Nonlinearity nl = make_builtin(PaperCritical{});
  GridSpec g{40.0, 1024};
  const Field u = gaussian(g, 0.5, 2.0);
  const Field v = u + gaussian(g, 0.05, 0.7);
  CHECK(energy_difference(u, v, nl) ==
        doctest::Approx(functional_value(v, nl) - functional_value(u, nl)).epsilon(1e-9));
  CHECK(energy_difference(u, u, nl) == 0.0);
}

TEST_CASE("overflow reports the amplitude") {
  const Nonlinearity nl = make_builtin(PaperCritical{});
  GridSpec g{20.0, 256};
  try {
    (void)energy(gaussian(g, 1e3, 1.0), nl);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    // First node where e^{alpha0 s^2} overflows: alpha0 s^2 > 709.
    CHECK(e.amplitude() > std::sqrt(709.0 / (oracle::pi / 4.0)));
    CHECK(e.amplitude() <= 1e3);
  }
}

TEST_CASE("upper bounds by substitution") {
  CHECK(ground_energy_upper_bound(4.0, 1.0, 1.0) == doctest::Approx(1.0 / 16.0));
  CHECK(norm_sq_upper_bound(4.0, 1.0, 4.0, 1.0) == doctest::Approx(0.25));
  CHECK_THROWS(ground_energy_upper_bound(2.0, 1.0, 1.0));
  CHECK_THROWS(norm_sq_upper_bound(4.0, 1.0, 2.0, 1.0));
}

TEST_CASE("S_q quotient") {
  const Field u = soliton_field();
  SUBCASE("scale invariance") {
    for (double c : {-3.0, 0.01, 7.0}) CHECK(sq_quotient(c * u, 3.0) == doctest::Approx(sq_quotient(u, 3.0)).epsilon(1e-13));
  }
  SUBCASE("soliton closed form") {
    // sqrt(3 pi) / (3 pi)^{1/3}.
    CHECK(sq_quotient(u, 3.0) == doctest::Approx(std::pow(3.0 * oracle::pi, 1.0 / 6.0)).epsilon(1e-3));
  }
  SUBCASE("estimate is below every member") {
    const SqEstimate e = sq_estimate(kWide, 4.0, {u});
    REQUIRE(e.gaussian_widths.size() == 64);
    for (const auto& [w, qv] : e.gaussian_widths) CHECK(e.value <= qv);
    CHECK(e.value <= sq_quotient(u, 4.0));
  }
  CHECK_THROWS(sq_quotient(Field::zeros(kWide), 3.0));
}

TEST_CASE("energy report serialisation") {
  const EnergyReport r = energy(soliton_field(), make_builtin(PurePower{2.0}));
  const auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(commas(EnergyReport::csv_header()) == commas(r.csv_row()));
  std::istringstream kv(r.to_key_value());
  std::string line;
  int n = 0;
  while (std::getline(kv, line)) {
    CHECK(line.find('=') != std::string::npos);
    ++n;
  }
  CHECK(n == 9);
}
