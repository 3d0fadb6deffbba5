#include "fracgs/solver.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <random>
#include <stdexcept>

#include "fracgs/errors.hpp"
#include "fracgs/field_io.hpp"
#include "fracgs/spectral.hpp"

namespace fracgs {

const char* to_string(InitKind k) noexcept {
  switch (k) {
    case InitKind::gaussian: return "gaussian";
    case InitKind::bump: return "bump";
    case InitKind::file: return "file";
  }
  return "?";
}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::overflow: return "overflow";
    case Termination::projection_failure: return "projection_failure";
    case Termination::line_search_stalled: return "line_search_stalled";
  }
  return "?";
}

void SolveConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("solve config: " + m); };
  if (!(tol_residual > 0.0)) fail("tol_residual must be positive");
  if (max_iters < 1) fail("max_iters must be at least 1");
  if (recenter_every < 0) fail("recenter_every must be >= 0");
  if (!(recenter_radius > 0.0) || !(recenter_radius < grid.half_width())) fail("recenter radius R must lie in (0, L)");
  if (!(step > 0.0)) fail("initial step must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) fail("shrink must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) fail("armijo constant must lie in (0, 1)");
  if (max_backtracks < 1) fail("max_backtracks must be at least 1");
  if (init != InitKind::file && !(init_width > 0.0)) fail("init width must be positive");
  if (!(init_amplitude >= 0.0) || !std::isfinite(init_amplitude)) fail("init amplitude must be >= 0 (0 = auto)");
  if (!(perturbation >= 0.0)) fail("perturbation must be >= 0");
  if (!(rho0 > 0.0)) fail("rho0 must be positive");
  if (!(gamma > 0.0)) fail("gamma must be positive");
  if (init == InitKind::file && init_file.empty()) fail("init = file needs init_file");
}

void SolveTrace::write_csv(std::ostream& out) const {
  out << "iter,J,phi,t0,residual,shift,norm\n";
  for (const auto& r : rows)
    out << r.iter << ',' << format_double(r.J) << ',' << format_double(r.phi_before) << ',' << format_double(r.t0)
        << ',' << format_double(r.residual) << ',' << format_double(r.shift) << ',' << format_double(r.norm) << '\n';
}

void SolveTrace::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out);
}

Field initial_field(const SolveConfig& cfg) {
  const GridSpec& g = cfg.grid;
  Field shape = Field::zeros(g);
  const double w = cfg.init_width;
  switch (cfg.init) {
    case InitKind::gaussian:
      shape = Field::sample(g, [w](double x) { return std::exp(-x * x / (2.0 * w * w)); });
      break;
    case InitKind::bump:
      shape = Field::sample(g, [w](double x) {
        const double r = x / w;
        return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
      });
      break;
    case InitKind::file: {
      shape = read_field_csv(cfg.init_file, g.boundary());
      if (!(shape.grid() == g)) throw std::invalid_argument("init file grid differs from the configured grid");
      break;
    }
  }
  if (cfg.perturbation > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(shape.values().begin(), shape.values().end());
    for (double& x : v) x *= 1.0 + cfg.perturbation * dist(rng);
    shape = Field(g, std::move(v));
  }
  if (cfg.init_amplitude > 0.0 && cfg.init != InitKind::file) return shape.scaled(cfg.init_amplitude);
  return shape;
}

std::vector<double> windowed_masses(const Field& u, double radius) {
  const GridSpec& g = u.grid();
  const std::size_t n = u.size();
  const double h = g.spacing();
  const auto m = static_cast<std::size_t>(std::max<long long>(1, std::llround(radius / h)));
  std::vector<double> sq(n);
  for (std::size_t j = 0; j < n; ++j) sq[j] = u[j] * u[j];
  std::vector<double> out(n);
  if (g.boundary() == Boundary::periodic) {
    std::vector<double> prefix(3 * n + 1, 0.0);
    for (std::size_t i = 0; i < 3 * n; ++i) prefix[i + 1] = prefix[i] + sq[i % n];
    const std::size_t span = std::min(m, (n - 1) / 2);
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t lo = c + n - span, hi = c + n + span;
      const double s = prefix[hi + 1] - prefix[lo] - 0.5 * (sq[lo % n] + sq[hi % n]);
      out[c] = h * s;
    }
    return out;
  }
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sq[i];
  for (std::size_t c = 0; c < n; ++c) {
    const bool lo_in = c >= m, hi_in = c + m <= n - 1;
    const std::size_t lo = lo_in ? c - m : 0, hi = hi_in ? c + m : n - 1;
    double s = prefix[hi + 1] - prefix[lo];
    if (lo_in) s -= 0.5 * sq[lo];
    if (hi_in) s -= 0.5 * sq[hi];
    out[c] = h * s;
  }
  return out;
}

Recentered recenter(const Field& u, double radius) {
  const GridSpec& g = u.grid();
  if (!(radius > 0.0) || !(radius < g.half_width())) throw std::invalid_argument("recenter: R must lie in (0, L)");
  const auto masses = windowed_masses(u, radius);
  double best = 0.0;
  for (double v : masses) best = std::max(best, v);
  const auto origin = static_cast<std::ptrdiff_t>(g.origin_index());
  std::ptrdiff_t chosen = origin;
  std::ptrdiff_t chosen_dist = -1;
  for (std::size_t c = 0; c < masses.size(); ++c) {
    if (masses[c] < best * (1.0 - 1e-12)) continue;
    const std::ptrdiff_t d = std::abs(static_cast<std::ptrdiff_t>(c) - origin);
    if (chosen_dist < 0 || d < chosen_dist) {
      chosen = static_cast<std::ptrdiff_t>(c);
      chosen_dist = d;
    }
  }
  const std::ptrdiff_t steps = origin - chosen;
  Recentered r{steps == 0 ? u : translate_steps(u, steps), static_cast<double>(steps) * g.spacing(), steps};
  return r;
}

VanishingReport vanishing_monitor(const SolveTrace& trace, const Field& u, double radius, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("vanishing_monitor: gamma must be positive");
  VanishingReport rep;
  rep.gamma = gamma;
  const auto masses = windowed_masses(u, radius);
  rep.final_mass = 0.0;
  for (double v : masses) rep.final_mass = std::max(rep.final_mass, v);
  rep.min_mass = rep.final_mass;
  for (const auto& row : trace.rows) rep.min_mass = std::min(rep.min_mass, row.window_mass);
  rep.non_vanishing = rep.min_mass >= gamma;
  return rep;
}

namespace {

double max_window_mass(const Field& u, double radius) {
  double m = 0.0;
  for (double v : windowed_masses(u, radius)) m = std::max(m, v);
  return m;
}

Field average(const std::deque<Field>& fields) {
  std::vector<double> v(fields.front().size(), 0.0);
  for (const auto& f : fields)
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += f[j];
  for (double& x : v) x /= static_cast<double>(fields.size());
  return Field(fields.front().grid(), std::move(v));
}

}  // namespace

SolveResult solve(const SolveConfig& cfg) {
  cfg.validate();
  const Nonlinearity nl = make_builtin(cfg.nl);
  SolveResult res{initial_field(cfg), std::nullopt, {}, 0.0, 0.0};
  SolveTrace& trace = res.trace;
  if (res.u.is_zero()) throw std::invalid_argument("solve: initial field is zero");

  Field& u = res.u;
  std::deque<Field> tail;
  try {
    double phi_before = phi(u, nl);
    double t0 = nehari_scale(u, nl);
    u = u.scaled(t0);
    double dJ = 0.0;
    bool done = false;
    for (int k = 0; !done; ++k) {
      double shift = 0.0;
      if (cfg.recenter_every > 0 && k > 0 && k % cfg.recenter_every == 0) {
        auto rc = recenter(u, cfg.recenter_radius);
        if (rc.steps != 0) {
          u = std::move(rc.u);
          tail.clear();
        }
        shift = rc.shift;
      }
      const Gradient grad = sobolev_gradient(u, nl);
      const double norm = std::sqrt(norms(u).h_half_sq);
      trace.rows.push_back({k, functional_value(u, nl), phi_before, t0, grad.dual_residual, shift, norm, dJ,
                            max_window_mass(u, cfg.recenter_radius)});
      trace.min_norm = k == 0 ? norm : std::min(trace.min_norm, norm);
      trace.max_norm = std::max(trace.max_norm, norm);
      tail.push_back(u);
      if (tail.size() > 10) tail.pop_front();

      if (grad.dual_residual < cfg.tol_residual) {
        trace.termination = Termination::converged;
        break;
      }
      if (k >= cfg.max_iters) {
        trace.termination = Termination::max_iters;
        break;
      }

      const double slope = grad.dual_residual * grad.dual_residual;
      double step = cfg.step;
      bool accepted = false;
      for (int b = 0; b < cfg.max_backtracks; ++b, step *= cfg.shrink) {
        const Field trial = u - grad.g.scaled(step);
        if (trial.is_zero()) continue;
        const double pb = phi(trial, nl);
        const double t = nehari_scale(trial, nl);
        Field projected = trial.scaled(t);
        const double d = energy_difference(u, projected, nl);
        if (d <= -cfg.armijo * step * slope) {
          u = std::move(projected);
          phi_before = pb;
          t0 = t;
          dJ = d;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        trace.termination = Termination::line_search_stalled;
        trace.message = "no Armijo step after " + std::to_string(cfg.max_backtracks) + " backtracks";
        done = true;
      } else {
        ++trace.iterations;
      }
    }
  } catch (const NumericalError& e) {
    trace.termination = Termination::overflow;
    trace.message = e.what();
  } catch (const ProjectionError& e) {
    trace.termination = Termination::projection_failure;
    trace.message = e.what();
  }

  try {
    res.report = energy(u, nl);
    if (!tail.empty()) {
      const Field avg = average(tail);
      res.phi_tail_average = phi(avg, nl);
      res.splitting_defect = phi(u, nl) - phi(u - avg, nl) - res.phi_tail_average;
    }
  } catch (const NumericalError& e) {
    if (trace.message.empty()) trace.message = e.what();
  }
  return res;
}

}  // namespace fracgs
