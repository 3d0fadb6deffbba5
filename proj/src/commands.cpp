#include "fracgs/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fracgs/errors.hpp"
#include "fracgs/field_io.hpp"
#include "fracgs/functional.hpp"
#include "fracgs/moser.hpp"
#include "fracgs/solver.hpp"
#include "fracgs/spectral.hpp"
#include "fracgs/verify.hpp"

#ifndef FRACGS_VERSION
#define FRACGS_VERSION "0.0.0"
#endif

namespace fracgs {

namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

const char* version() noexcept { return FRACGS_VERSION; }

void RunReport::value(const std::string& key, double v) { values_.emplace_back(key, format_double(v)); }

void RunReport::value(const std::string& key, const std::string& v) { values_.emplace_back(key, v); }

void RunReport::check(const std::string& name, bool pass, const std::string& detail) {
  rows_.push_back({name, pass, detail});
}

bool RunReport::all_pass() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.pass; });
}

std::string RunReport::summary() const {
  std::ostringstream os;
  os << "command=" << command_ << "\n";
  for (const auto& [k, v] : values_) os << k << "=" << v << "\n";
  os << "checks_passed=" << (all_pass() ? "true" : "false") << "\n";
  return os.str();
}

std::string RunReport::table() const {
  std::ostringstream os;
  std::size_t width = 0;
  for (const auto& r : rows_) width = std::max(width, r.name.size());
  for (const auto& r : rows_)
    os << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(static_cast<int>(width)) << r.name << "  "
       << r.detail << "\n";
  return os.str();
}

std::string RunReport::render(const RunConfig& cfg) const {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << "fracgs " << version() << "\n"
     << "generated " << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << "\n\n"
     << "## config\n"
     << cfg.echo() << "\n## results\n"
     << summary() << "\n## checks\n"
     << table();
  return os.str();
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void finish(const RunReport& rep, const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  write_text(out / "summary.txt", rep.summary());
  write_text(out / "report.txt", rep.render(cfg));
  log << rep.table();
}

std::string rel_detail(double got, double want, double tol) {
  std::ostringstream os;
  os << "got " << format_double(got) << ", want " << format_double(want) << " (tol " << tol << ")";
  return os.str();
}

bool rel_close(double got, double want, double tol) { return std::abs(got - want) <= tol * std::abs(want); }

// Default exponent q (and AR theta) per family.
double family_q(const BuiltinSpec& spec) {
  if (const auto* p = std::get_if<PurePower>(&spec)) return p->p + 1.0;
  if (const auto* c = std::get_if<PaperCritical>(&spec)) return c->q;
  return 4.0;
}

double auto_or(const RunConfig& cfg, const std::string& key, double fallback) {
  return cfg.is_auto(key) ? fallback : cfg.get_double(key);
}

Sample audit_sample(const RunConfig& cfg) {
  const long long points = cfg.get_int("audit.points");
  if (points < 2) throw ConfigError("audit.points must be at least 2", "<config>", 0, 0);
  try {
    return symmetric_log_sample(cfg.get_double("audit.s_min"), cfg.get_double("audit.s_max"),
                                static_cast<std::size_t>(points));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), "<config>", 0, 0);
  }
}

struct BoundInputs {
  double q;
  double theta;
  double c_q;
};

BoundInputs bound_inputs(const RunConfig& cfg, const BuiltinSpec& spec, const Nonlinearity& nl) {
  BoundInputs b;
  b.q = auto_or(cfg, "audit.q", family_q(spec));
  b.theta = auto_or(cfg, "audit.theta", family_q(spec));
  b.c_q = cfg.is_auto("audit.C_q") ? estimate_cq(nl, b.q, audit_sample(cfg)) : cfg.get_double("audit.C_q");
  return b;
}

int exit_for(Termination t) {
  switch (t) {
    case Termination::converged: return exit_code::ok;
    case Termination::max_iters:
    case Termination::line_search_stalled: return exit_code::nonconvergence;
    case Termination::overflow:
    case Termination::projection_failure: return exit_code::numeric;
  }
  return exit_code::numeric;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const SolveConfig sc = cfg.solve_config();
  const Nonlinearity nl = make_builtin(sc.nl);
  const BoundInputs bi = bound_inputs(cfg, sc.nl, nl);
  fs::create_directories(out);

  const SolveResult res = solve(sc);
  write_field_csv(out / "field.csv", res.u);
  res.trace.write_csv(out / "trace.csv");

  RunReport rep("solve");
  rep.value("nonlinearity", nl.describe());
  rep.value("termination", to_string(res.trace.termination));
  if (!res.trace.message.empty()) rep.value("message", res.trace.message);
  rep.value("iterations", std::to_string(res.trace.iterations));
  rep.check("converged", res.trace.termination == Termination::converged,
            std::string("termination ") + to_string(res.trace.termination));

  bool monotone = true;
  for (std::size_t i = 1; i < res.trace.rows.size(); ++i) monotone = monotone && res.trace.rows[i].dJ < 0.0;
  rep.check("J_monotone", monotone, "every accepted step lowers J");

  const double boundary = boundary_amplitude(res.u);
  rep.value("boundary_amplitude", boundary);
  if (boundary > 1e-8)
    log << "warning: |u| at the box edge is " << format_double(boundary) << " (> 1e-8); consider a larger L\n";

  if (res.report) {
    const EnergyReport& e = *res.report;
    std::istringstream kv(e.to_key_value());
    for (std::string line; std::getline(kv, line);) {
      const auto eq = line.find('=');
      rep.value(line.substr(0, eq), line.substr(eq + 1));
    }
    rep.check("nehari_constraint", std::abs(e.Phi) <= 1e-10 * e.norm_sq,
              "|Phi|/||u||^2 = " + format_double(std::abs(e.Phi) / e.norm_sq));
    rep.check("J_equals_half_H", std::abs(e.J - 0.5 * e.H_integral) <= 1e-10 * std::abs(e.J),
              "J - H/2 = " + format_double(e.J - 0.5 * e.H_integral));

    rep.value("norm_min_over_iterates", res.trace.min_norm);
    rep.value("norm_max_over_iterates", res.trace.max_norm);
    rep.value("rho0", sc.rho0);
    rep.value("rho0_respected", res.trace.max_norm <= sc.rho0 ? "true" : "false");

    const VanishingReport vm = vanishing_monitor(res.trace, res.u, sc.recenter_radius, sc.gamma);
    rep.value("window_mass_final", vm.final_mass);
    rep.value("window_mass_min", vm.min_mass);
    rep.check("non_vanishing", vm.non_vanishing, "min windowed mass " + format_double(vm.min_mass) +
                                                    " vs gamma " + format_double(vm.gamma));
    rep.value("phi_tail_average", res.phi_tail_average);
    rep.value("splitting_defect", res.splitting_defect);

    const SqEstimate sq = sq_estimate(sc.grid, bi.q, {res.u});
    const double ground = ground_energy_upper_bound(bi.q, bi.c_q, sq.value);
    const double cap = norm_sq_upper_bound(bi.q, bi.c_q, bi.theta, sq.value);
    rep.value("bound_q", bi.q);
    rep.value("bound_theta", bi.theta);
    rep.value("bound_C_q", bi.c_q);
    rep.value("S_q_estimate", sq.value);
    rep.value("S_q_family", sq.family + " plus the final iterate");
    rep.value("S_q_best", sq.best);
    rep.value("ground_energy_upper_bound", ground);
    rep.value("norm_sq_upper_bound", cap);
    rep.value("smallness_regime_active", cap < sc.rho0 * sc.rho0 ? "true" : "false");
    rep.check("J_below_ground_bound", e.J <= ground * (1.0 + 1e-9),
              format_double(e.J) + " <= " + format_double(ground));
    rep.check("norm_sq_below_cap", e.norm_sq <= cap * (1.0 + 1e-9),
              format_double(e.norm_sq) + " <= " + format_double(cap));
  }
  finish(rep, cfg, out, log);
  return exit_for(res.trace.termination);
}

int cmd_audit(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const BuiltinSpec spec = cfg.nonlinearity();
  const Nonlinearity nl = make_builtin(spec);
  const Sample sample = audit_sample(cfg);
  const BoundInputs bi = bound_inputs(cfg, spec, nl);
  const double growth_s_max = cfg.get_double("audit.growth_s_max");
  if (!(growth_s_max >= 20.0)) throw ConfigError("audit.growth_s_max must be at least 20", "<config>", 0, 0);
  fs::create_directories(out);

  const HypothesisReport hr = audit(nl, sample, bi.theta, bi.c_q, bi.q);
  RunReport rep("audit");
  rep.value("nonlinearity", nl.describe());
  rep.value("declared_growth", describe(nl.declared_growth()));
  rep.value("sample", hr.sample);
  rep.value("theta", bi.theta);
  rep.value("C_q", bi.c_q);
  rep.value("q", bi.q);
  rep.value("C_q_estimate", estimate_cq(nl, bi.q, sample));
  for (const auto& c : hr.checks) {
    std::ostringstream detail;
    detail << c.violations << " violations";
    for (const auto& w : c.witnesses) detail << " (s=" << format_double(w.s) << ", " << format_double(w.value) << ")";
    rep.check(c.name, c.pass, detail.str());
  }

  const GrowthEstimate ge = classify_growth(nl, cfg.get_list("audit.alphas"), growth_s_max);
  std::ostringstream trends;
  for (const auto& t : ge.per_alpha)
    trends << format_double(t.alpha) << ":" << to_string(t.f_ratio) << "/" << to_string(t.fprime_s_ratio) << " ";
  rep.value("growth_trends", trends.str());
  rep.value("alpha0_lower", ge.alpha0_lower);
  rep.value("alpha0_upper", ge.alpha0_upper);
  const char* names[] = {"subcritical", "critical", "supercritical"};
  rep.value("inferred_growth", names[static_cast<int>(ge.inferred)]);
  const Growth& declared = nl.declared_growth();
  bool consistent = ge.inferred == declared.kind;
  if (consistent && declared.kind == GrowthClass::critical)
    consistent = ge.alpha0_lower <= declared.alpha0 && declared.alpha0 <= ge.alpha0_upper;
  rep.check("growth_class", consistent,
            "declared " + describe(declared) + ", bracket [" + format_double(ge.alpha0_lower) + ", " +
                format_double(ge.alpha0_upper) + "]");

  finish(rep, cfg, out, log);
  return rep.all_pass() ? exit_code::ok : exit_code::check_failed;
}

int cmd_moser(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const GridSpec grid = cfg.grid();
  std::vector<double> alphas = cfg.get_list("moser.alphas");
  std::sort(alphas.begin(), alphas.end());
  for (double a : alphas)
    if (!(a > 0.0)) throw ConfigError("moser.alphas must be positive", "<config>", 0, 0);
  TrialFamily family;
  try {
    family = trial_family_from_string(cfg.get("moser.family"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), "<config>", 0, 0);
  }
  const long long budget = cfg.get_int("moser.budget");
  if (budget < 4) throw ConfigError("moser.budget must be at least 4", "<config>", 0, 0);
  const double rho0 = cfg.get_double("moser.rho0");
  fs::create_directories(out);

  RunReport rep("moser");
  std::ofstream csv(out / "moser.csv");
  csv << "trial_id,alpha,seminorm_sq,l2_sq,integral,ratio\n";
  double prev_sup = 0.0;
  bool monotone = true, constraint = true, small = true;
  for (double a : alphas) {
    const MoserProbe p = probe_H(grid, a, family, static_cast<int>(budget));
    std::ostringstream body;
    p.write_csv(body);
    std::string text = body.str();
    csv << text.substr(text.find('\n') + 1);
    const std::string tag = "alpha_" + format_double(a) + ".";
    rep.value(tag + "H_alpha_lower", p.sup_ratio);
    rep.value(tag + "skipped_overflow", std::to_string(p.skipped));
    rep.value(tag + "concentration_trend", p.trend);
    rep.value(tag + "concentration_rate", p.concentration_rate);
    rep.value(tag + "concentration_nondecreasing", p.concentration_nondecreasing ? "true" : "false");
    monotone = monotone && p.sup_ratio >= prev_sup;
    prev_sup = p.sup_ratio;
    for (const auto& t : p.trials) constraint = constraint && t.seminorm_sq <= 1.0 + 1e-10;
    const auto& first = p.trials.front();
    small = small && !first.skipped && std::abs(first.ratio / a - 1.0) <= 1e-2;
  }
  rep.value("family", to_string(family));
  rep.check("seminorm_constraint", constraint, "every trial has seminorm^2 <= 1");
  rep.check("small_amplitude_ratio", small, "smallest-amplitude member has ratio within 1% of alpha");
  rep.check("H_monotone_in_alpha", monotone, "empirical H_alpha nondecreasing in alpha");

  // Equality and strict cases of the first inequality in the Lambda bound.
  const Field g = Field::sample(grid, [](double x) { return std::exp(-x * x / 8.0); });
  const double gnorm = std::sqrt(norms(g).h_half_sq);
  const double a0 = alphas.front();
  const LambdaBoundReport eq = lambda_bound_check(g.scaled(rho0 / gnorm), a0, rho0);
  const LambdaBoundReport half = lambda_bound_check(g.scaled(0.5 * rho0 / gnorm), a0, rho0);
  rep.value("lambda_bound_equal_slack", eq.slack);
  rep.value("lambda_bound_half_slack", half.slack);
  rep.check("lambda_bound_equality", eq.applicable && eq.holds && std::abs(eq.slack) <= 1e-12 * eq.rhs,
            "||u|| = rho0 gives equal integrals");
  rep.check("lambda_bound_strict", half.applicable && half.holds && half.slack > 0.0,
            "||u|| = rho0/2 gives strict inequality");
  finish(rep, cfg, out, log);
  return exit_code::ok;
}

int cmd_verify(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const GridSpec grid = cfg.grid();
  const BuiltinSpec spec = cfg.nonlinearity();
  const Nonlinearity nl = make_builtin(spec);
  const double amp = cfg.get_double("verify.bump_amplitude");
  const double sigma = cfg.get_double("verify.bump_sigma");
  const double center = cfg.get_double("verify.bump_center");
  if (!(sigma > 0.0)) throw ConfigError("verify.bump_sigma must be positive", "<config>", 0, 0);
  std::vector<double> seps = cfg.get_list("verify.separations");
  const double rho0 = cfg.get_double("verify.rho0");
  fs::create_directories(out);

  const Field u = Field::sample(
      grid, [&](double x) { return amp * std::exp(-(x - center) * (x - center) / (2.0 * sigma * sigma)); });
  SplitExperiment ex;
  try {
    ex = run_split_experiment(u, u, seps, nl);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), "<config>", 0, 0);
  }
  {
    std::ofstream csv(out / "verify.csv");
    ex.write_csv(csv);
  }

  RunReport rep("verify");
  rep.value("nonlinearity", nl.describe());
  rep.value("max_norm", ex.max_norm);
  rep.value("rho0", rho0);
  rep.value("rho0_respected", ex.max_norm <= rho0 ? "true" : "false");
  rep.check("defects_monotone", ex.monotone(), "normalized defects decrease with separation");
  rep.check("defects_vanish", ex.final_normalized() <= 1e-6,
            "largest normalized defect at d=" + format_double(seps.back()) + ": " +
                format_double(ex.final_normalized()));
  rep.check("H_triangle_bound", ex.triangle_bound(), "H-defect <= fu-defect + 2 F-defect");

  // Splitting identity: the local part cancels, the norm part is the
  // nonlocal cross term 2<u, v_n>.
  double prev_cross = INFINITY;
  bool cross_decays = true;
  double last_local = 0.0;
  for (double d : seps) {
    const auto steps = static_cast<std::ptrdiff_t>(std::llround(d / grid.spacing()));
    const SplittingIdentity si = splitting_identity_check(u, u, steps, nl);
    const std::string tag = "split_d_" + format_double(d) + ".";
    rep.value(tag + "total_normalized", si.total / si.norm_sq);
    rep.value(tag + "local_normalized", si.local / si.norm_sq);
    rep.value(tag + "norm_cross_normalized", si.norm_part / si.norm_sq);
    cross_decays = cross_decays && std::abs(si.norm_part) < prev_cross;
    prev_cross = std::abs(si.norm_part);
    last_local = si.local / si.norm_sq;
  }
  rep.check("splitting_local_vanishes", last_local <= 1e-6, "local part " + format_double(last_local));
  rep.check("splitting_cross_term_decays", cross_decays, "|2<u, v_n>| decreases with separation");

  // J = H/2 on the Nehari manifold, for the projected pair at the largest separation.
  const auto last_steps = static_cast<std::ptrdiff_t>(std::llround(seps.back() / grid.spacing()));
  const Field pair = u + translate_steps(u, last_steps);
  const Field projected = pair.scaled(nehari_scale(pair, nl));
  const EnergyReport er = energy(projected, nl);
  rep.check("J_equals_half_H", std::abs(er.J - 0.5 * er.H_integral) <= 1e-10 * std::abs(er.J),
            "J - H/2 = " + format_double(er.J - 0.5 * er.H_integral));

  const Growth& g = nl.declared_growth();
  const double alpha = auto_or(cfg, "verify.envelope_alpha", g.kind == GrowthClass::critical ? g.alpha0 + 0.1 : 1.0);
  const double q = auto_or(cfg, "verify.envelope_q", family_q(spec));
  const Sample sample = audit_sample(cfg);
  const bool auto_D = cfg.is_auto("verify.envelope_D");
  EnvelopeReport env = growth_envelope_check(nl, alpha, auto_D ? 0.0 : cfg.get_double("verify.envelope_D"), q, sample);
  if (auto_D) {
    double D = 0.0;
    for (const auto& c : env.checks) D = std::max(D, c.min_D);
    env = growth_envelope_check(nl, alpha, D * (1.0 + 1e-9), q, sample);
  }
  rep.value("envelope_alpha", alpha);
  rep.value("envelope_q", q);
  rep.value("envelope_D", env.D);
  for (const auto& c : env.checks) {
    rep.value("envelope_" + c.name + ".min_D", c.min_D);
    rep.check("envelope_" + c.name, c.holds,
              "min D " + format_double(c.min_D) + ", unevaluated " + std::to_string(c.unevaluated));
  }
  finish(rep, cfg, out, log);
  return rep.all_pass() ? exit_code::ok : exit_code::check_failed;
}

int cmd_oracle(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const GridSpec grid = cfg.grid();
  const Nonlinearity nl = make_builtin(PurePower{2.0});
  fs::create_directories(out);
  RunReport rep("oracle");
  rep.value("grid", "L=" + format_double(grid.half_width()) + " N=" + std::to_string(grid.size()) + " " +
                        to_string(grid.boundary()));

  const Field u = Field::sample(grid, [](double x) { return 2.0 / (1.0 + x * x); });
  const Field lu = frac_laplacian(u);
  double err = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = grid.x(j);
    if (std::abs(x) > 10.0) continue;
    const double exact = 2.0 * (1.0 - x * x) / ((1.0 + x * x) * (1.0 + x * x));
    err = std::max(err, std::abs(lu[j] - exact));
    peak = std::max(peak, std::abs(exact));
  }
  rep.check("operator_soliton", err <= 1e-4 * peak, "sup-relative error " + format_double(err / peak));
  if (grid.half_width() > 4.0 * grid.spacing()) {
    const double sing = frac_laplacian_singular(u, 0.0, grid.spacing());
    rep.check("singular_integral_x0", std::abs(sing - 2.0) <= 1e-3, rel_detail(sing, 2.0, 1e-3));
  }

  const Norms n = norms(u);
  rep.check("l2_sq", rel_close(n.l2_sq, 2.0 * pi, 1e-3), rel_detail(n.l2_sq, 2.0 * pi, 1e-3));
  rep.check("seminorm_sq", rel_close(n.seminorm_sq, pi, 1e-3), rel_detail(n.seminorm_sq, pi, 1e-3));
  rep.check("h_half_sq", rel_close(n.h_half_sq, 3.0 * pi, 1e-3), rel_detail(n.h_half_sq, 3.0 * pi, 1e-3));
  const double l3 = std::pow(lp_norm(u, 3.0), 3.0);
  rep.check("l3_cubed", rel_close(l3, 3.0 * pi, 1e-3), rel_detail(l3, 3.0 * pi, 1e-3));

  try {
    const EnergyReport e = energy(u, nl);
    rep.check("J", rel_close(e.J, pi / 2.0, 1e-3), rel_detail(e.J, pi / 2.0, 1e-3));
    rep.check("Phi", std::abs(e.Phi) <= 1e-6 * e.norm_sq, "|Phi|/||u||^2 = " + format_double(std::abs(e.Phi) / e.norm_sq));
    rep.check("H_integral", rel_close(e.H_integral, pi, 1e-3), rel_detail(e.H_integral, pi, 1e-3));
    rep.check("residual", e.dual_residual <= 5e-3, "||g|| = " + format_double(e.dual_residual) + " (tol 5e-3)");
    const double t1 = nehari_scale(u, nl);
    const double t2 = nehari_scale(u.scaled(2.0), nl);
    rep.check("nehari_scale_u", std::abs(t1 - 1.0) <= 1e-6, rel_detail(t1, 1.0, 1e-6));
    rep.check("nehari_scale_2u", std::abs(t2 - 0.5) <= 1e-6, rel_detail(t2, 0.5, 1e-6));
  } catch (const ProjectionError& e) {
    rep.check("nehari_scale", false, e.what());
  }
  rep.value("boundary_amplitude", boundary_amplitude(u));
  finish(rep, cfg, out, log);
  return rep.all_pass() ? exit_code::ok : exit_code::check_failed;
}

int run_command(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  try {
    const std::string cmd = cfg.command();
    if (cmd == "solve") return cmd_solve(cfg, out, log);
    if (cmd == "audit") return cmd_audit(cfg, out, log);
    if (cmd == "moser") return cmd_moser(cfg, out, log);
    if (cmd == "verify") return cmd_verify(cfg, out, log);
    if (cmd == "oracle") return cmd_oracle(cfg, out, log);
    throw ConfigError("run.command: expected solve, audit, moser, verify or oracle", "<config>", 0, 0);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::config;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << "\n";
    return exit_code::numeric;
  } catch (const ProjectionError& e) {
    log << "numerical failure: " << e.what() << "\n";
    return exit_code::numeric;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::config;
  }
}

}  // namespace fracgs
