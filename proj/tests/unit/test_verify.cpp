#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fracgs/functional.hpp"
#include "fracgs/spectral.hpp"
#include "fracgs/verify.hpp"
#include "../support.hpp"

using namespace fracgs;

namespace {
const GridSpec kGrid{80.0, 4096};

Field bump(double centre, double sigma = 2.0) {
  return Field::sample(kGrid, [=](double x) { return std::exp(-(x - centre) * (x - centre) / (2 * sigma * sigma)); });
}

std::ptrdiff_t steps(double d) { return static_cast<std::ptrdiff_t>(std::lround(d / kGrid.spacing())); }

const SplitFunctional kAll[] = {SplitFunctional::fu, SplitFunctional::F, SplitFunctional::H};
}  // namespace

TEST_CASE("defect of a zero partner is exactly zero") {
  const Nonlinearity nl = make_builtin(PaperCritical{});
  for (auto g : kAll) CHECK(brezis_lieb_defect(bump(0.0), Field::zeros(kGrid), 37, nl, g) == 0.0);
}

TEST_CASE("coincident bumps give the superadditivity gap") {
  const Nonlinearity nl = make_builtin(PurePower{2.0});
  const Field u = bump(0.0);
  for (auto g : kAll) {
    const double want = std::abs(integral_of(2.0 * u, nl, g) - 2.0 * integral_of(u, nl, g));
    const double got = brezis_lieb_defect(u, u, 0, nl, g);
    CHECK(got > 0.0);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("Brezis-Lieb decay for two unit bumps") {
  for (const BuiltinSpec& spec : std::vector<BuiltinSpec>{PurePower{2.0}, PaperCritical{}}) {
    const Nonlinearity nl = make_builtin(spec);
    const SplitExperiment e = run_split_experiment(bump(-20.0), bump(-20.0), {10.0, 20.0, 40.0}, nl);
    CHECK(e.rows.size() == 9);
    CHECK(e.monotone());
    CHECK(e.final_normalized() < 1e-6);
    CHECK(e.triangle_bound());
    std::ostringstream os;
    e.write_csv(os);
    CHECK(os.str().rfind("d,functional,defect,defect_normalized\n", 0) == 0);
  }
}

TEST_CASE("separations must be whole steps and increasing") {
  const Nonlinearity nl = make_builtin(PurePower{2.0});
  CHECK_THROWS_AS(run_split_experiment(bump(0), bump(0), {10.01}, nl), std::invalid_argument);
  CHECK_THROWS_AS(run_split_experiment(bump(0), bump(0), {20.0, 10.0}, nl), std::invalid_argument);
}

TEST_CASE("growth envelopes") {
  const Sample sample = symmetric_log_sample(1e-6, 8.0, 200);
  SUBCASE("pure power is dominated") {
    const EnvelopeReport r = growth_envelope_check(make_builtin(PurePower{2.0}), 1.0, 1.0, 3.0, sample);
    REQUIRE(r.checks.size() == 4);
    CHECK(r.all_hold());
  }
  SUBCASE("paper-critical with alpha above alpha0: minimal D suffices") {
    const Nonlinearity nl = make_builtin(PaperCritical{1.0, 4.0, 0.5});
    const EnvelopeReport probe = growth_envelope_check(nl, 0.6, 0.0, 4.0, sample);
    double d = 0.0;
    for (const auto& c : probe.checks) {
      CHECK(c.unevaluated == 0);
      CHECK(std::isfinite(c.min_D));
      d = std::max(d, c.min_D);
    }
    CHECK(d > 0.0);
    CHECK(growth_envelope_check(nl, 0.6, d * (1 + 1e-9), 4.0, sample).all_hold());
    CHECK_FALSE(growth_envelope_check(nl, 0.6, 0.5 * d, 4.0, sample).all_hold());
  }
}

TEST_CASE("splitting identity") {
  const Nonlinearity nl = make_builtin(PurePower{2.0});
  const Field u = bump(-20.0);
  SUBCASE("zero partner") {
    const SplittingIdentity s = splitting_identity_check(u, Field::zeros(kGrid), steps(40.0), nl);
    CHECK(s.total == 0.0);
    CHECK(s.local == 0.0);
  }
  SUBCASE("far-separated bumps") {
    const SplittingIdentity s = splitting_identity_check(u, u, steps(40.0), nl);
    CHECK(s.local <= 1e-6 * s.norm_sq);
    CHECK(s.total == doctest::Approx(std::abs(s.local - s.norm_part)).epsilon(1e-6).scale(1e-14));
  }
  SUBCASE("cross term is nonzero and decays") {
    double prev = INFINITY;
    for (double d : {10.0, 20.0, 40.0}) {
      const SplittingIdentity s = splitting_identity_check(u, u, steps(d), nl);
      CHECK(std::abs(s.norm_part) > 0.0);
      CHECK(std::abs(s.norm_part) < prev);
      prev = std::abs(s.norm_part);
    }
  }
}
