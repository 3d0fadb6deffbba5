#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fracgs/field_io.hpp"
#include "fracgs/functional.hpp"
#include "fracgs/solver.hpp"
#include "fracgs/spectral.hpp"
#include "../support.hpp"

using namespace fracgs;

namespace {

std::string trace_text(const SolveTrace& t) {
  std::ostringstream os;
  t.write_csv(os);
  return os.str();
}

// max |u(x) - u*(x - c)| over the best whole-step offset c near the origin.
double distance_to_soliton(const Field& u) {
  const auto& g = u.grid();
  double best = INFINITY;
  for (int s = -4; s <= 4; ++s) {
    double d = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) d = std::max(d, std::abs(u[j] - oracle::soliton(g.x(j) - s * g.spacing())));
    best = std::min(best, d);
  }
  return best;
}

const SolveResult& soliton_run() {
  static const SolveResult r = solve(SolveConfig{});
  return r;
}

}  // namespace

TEST_CASE("soliton from a Gaussian start") {
  const SolveResult& r = soliton_run();
  REQUIRE(r.trace.termination == Termination::converged);
  REQUIRE(r.report.has_value());
  CHECK(r.report->dual_residual < 1e-8);
  CHECK(r.report->J == doctest::Approx(oracle::pi / 2.0).epsilon(1e-3));
  CHECK(distance_to_soliton(r.u) <= 1e-2);
  CHECK(r.trace.iterations <= 500);
  CHECK(std::abs(r.report->Phi) <= 1e-10 * r.report->norm_sq);
}

TEST_CASE("J decreases on every accepted step") {
  const SolveTrace& t = soliton_run().trace;
  REQUIRE(t.rows.size() > 2);
  for (std::size_t k = 1; k < t.rows.size(); ++k) CHECK(t.rows[k].dJ < 0.0);
}

TEST_CASE("trace csv layout") {
  const std::string csv = trace_text(soliton_run().trace);
  CHECK(csv.rfind("iter,J,phi,t0,residual,shift,norm\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == soliton_run().trace.rows.size() + 1);
}

TEST_CASE("projected soliton start") {
  const auto dir = testutil::scratch_dir("solver_init");
  const GridSpec g{80.0, 4096};
  const Nonlinearity nl = make_builtin(PurePower{2.0});
  const Field u = Field::sample(g, oracle::soliton);
  write_field_csv(dir / "init.csv", nehari_scale(u, nl) * u);

  SolveConfig cfg;
  cfg.init = InitKind::file;
  cfg.init_file = dir / "init.csv";
  const SolveResult r = solve(cfg);
  CHECK(r.trace.termination == Termination::converged);
  for (const auto& row : r.trace.rows) CHECK(row.shift == 0.0);
  CHECK(r.trace.iterations < soliton_run().trace.iterations);
}

TEST_CASE("determinism") {
  SolveConfig cfg;
  cfg.nl = PaperCritical{};
  cfg.perturbation = 0.05;
  cfg.seed = 7;
  const SolveResult a = solve(cfg);
  const SolveResult b = solve(cfg);
  CHECK(trace_text(a.trace) == trace_text(b.trace));
  std::ostringstream fa, fb;
  write_field_csv(fa, a.u);
  write_field_csv(fb, b.u);
  CHECK(fa.str() == fb.str());
}

TEST_CASE("forced terminations") {
  SUBCASE("iteration cap") {
    SolveConfig cfg;
    cfg.max_iters = 1;
    const SolveResult r = solve(cfg);
    CHECK(r.trace.termination == Termination::max_iters);
    CHECK_FALSE(r.trace.rows.empty());
  }
  SUBCASE("overflow") {
    SolveConfig cfg;
    cfg.nl = PaperCritical{};
    cfg.init_amplitude = 1e6;
    const SolveResult r = solve(cfg);
    CHECK(r.trace.termination == Termination::overflow);
    CHECK_FALSE(r.report.has_value());
  }
}

TEST_CASE("config validation") {
  SolveConfig cfg;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolveConfig{};
  cfg.recenter_radius = 100.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolveConfig{};
  cfg.tol_residual = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("recentering") {
  const GridSpec g{80.0, 4096};
  const Field u = Field::sample(g, oracle::soliton);

  SUBCASE("symmetric field is not moved") {
    const Recentered r = recenter(u, 5.0);
    CHECK(r.steps == 0);
    CHECK(r.shift == 0.0);
  }
  SUBCASE("translated soliton comes back") {
    for (std::ptrdiff_t k : {-15, 15, 150}) {
      const Field t = translate_steps(u, k);
      const Recentered r = recenter(t, 5.0);
      CHECK(r.steps == -k);
      CHECK(r.shift == doctest::Approx(-k * g.spacing()));
      const auto before = windowed_masses(t, 5.0)[g.origin_index()];
      const auto after = windowed_masses(r.u, 5.0)[g.origin_index()];
      CHECK(after >= before);
    }
  }
  SUBCASE("norms and J are preserved") {
    const GridSpec p{40.0, 1024, Boundary::periodic};
    const Field v = Field::sample(p, [](double x) { return std::exp(-(x - 9) * (x - 9) / 3.0); });
    const Recentered r = recenter(v, 5.0);
    CHECK(r.steps != 0);
    const Nonlinearity nl = make_builtin(PaperCritical{});
    CHECK(norms(r.u).h_half_sq == doctest::Approx(norms(v).h_half_sq).epsilon(1e-13));
    CHECK(functional_value(r.u, nl) == doctest::Approx(functional_value(v, nl)).epsilon(1e-13));
  }
}

TEST_CASE("windowed mass and the vanishing monitor") {
  const GridSpec g{80.0, 4096};
  const Field u = Field::sample(g, oracle::soliton);
  const double R = 5.0;
  CHECK(windowed_masses(u, R)[g.origin_index()] == doctest::Approx(oracle::soliton_window_mass(R)).epsilon(1e-6));

  const SolveResult& run = soliton_run();
  const VanishingReport v = vanishing_monitor(run.trace, run.u, R, 1e-3);
  CHECK(v.non_vanishing);
  CHECK(v.final_mass == doctest::Approx(oracle::soliton_window_mass(R)).epsilon(1e-2));

  const VanishingReport z = vanishing_monitor(SolveTrace{}, Field::zeros(g), R, 1e-3);
  CHECK_FALSE(z.non_vanishing);

  const VanishingReport t = vanishing_monitor(SolveTrace{}, translate_steps(u, 333), R, 1e-3);
  const VanishingReport c = vanishing_monitor(SolveTrace{}, u, R, 1e-3);
  CHECK(t.final_mass == doctest::Approx(c.final_mass).epsilon(1e-12));
}
