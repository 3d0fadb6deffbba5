#include "fracgs/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "fracgs/primitive_table.hpp"

namespace fracgs {

namespace {

constexpr std::size_t kMaxWitnesses = 5;

bool is_even_integer(double q) {
  return q == std::round(q) && static_cast<long long>(q) % 2 == 0;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// Tabulation endpoint: e^{alpha s^nu} representable and resolved by the
// 2048-interval table (step * alpha nu s^{nu-1} <= 0.05). Larger |s| is
// integrated directly.
double table_end(double alpha0, double nu) {
  const double representable = std::pow(600.0 / alpha0, 1.0 / nu);
  const double resolved = std::pow(0.05 * 2048.0 / (alpha0 * nu), 1.0 / nu);
  return std::min({12.0, representable, resolved});
}

Nonlinearity build(const PurePower& spec) {
  const double p = spec.p;
  require(std::isfinite(p) && p > 1.0, "pure_power: (f1) needs f(s)/s -> 0 at 0, so p must exceed 1");
  Nonlinearity::Functions fns;
  fns.f = [p](double s) { return std::copysign(std::pow(std::abs(s), p), s); };
  fns.F = [p](double s) { return std::pow(std::abs(s), p + 1.0) / (p + 1.0); };
  fns.fprime = [p](double s) { return p * std::pow(std::abs(s), p - 1.0); };
  fns.log_abs_f = [p](double s) { return p * std::log(std::abs(s)); };
  fns.log_abs_fprime_s = [p](double s) { return std::log(p) + p * std::log(std::abs(s)); };
  return Nonlinearity("pure_power", {{"p", p}}, Growth{GrowthClass::subcritical, 0.0}, std::move(fns));
}

Nonlinearity build(const PaperCritical& spec) {
  const double lambda = spec.lambda, q = spec.q, a0 = spec.alpha0;
  require(std::isfinite(lambda) && lambda >= 0.0, "paper_critical: (f1) convexity needs lambda >= 0");
  require(std::isfinite(q) && q > 2.0, "paper_critical: (f3) needs q > 2");
  require(std::isfinite(a0) && a0 > 0.0, "paper_critical: critical growth needs alpha0 > 0");
  Nonlinearity::Functions fns;
  fns.f = [=](double s) {
    const double a = std::abs(s);
    return std::copysign(std::pow(a, q - 1.0) * (lambda + std::exp(a0 * a * a)), s);
  };
  fns.fprime = [=](double s) {
    const double a = std::abs(s);
    const double e = std::exp(a0 * a * a);
    return std::pow(a, q - 2.0) * (lambda * (q - 1.0) + e * ((q - 1.0) + 2.0 * a0 * a * a));
  };
  if (is_even_integer(q)) {
    const double k = q / 2.0;
    fns.F = [=](double s) {
      const double w = s * s;
      return lambda * std::pow(w, k) / q + exp_moment_series(a0, w, k);
    };
  } else {
    auto table = std::make_shared<const PrimitiveTable>(fns.f, fns.fprime, table_end(a0, 2.0));
    fns.F = [table](double s) { return (*table)(s); };
  }
  fns.log_abs_f = [=](double s) {
    const double a = std::abs(s);
    return (q - 1.0) * std::log(a) + a0 * a * a + std::log1p(lambda * std::exp(-a0 * a * a));
  };
  fns.log_abs_fprime_s = [=](double s) {
    const double a = std::abs(s);
    const double x = a0 * a * a;
    return (q - 1.0) * std::log(a) + x + std::log((q - 1.0) + 2.0 * x + lambda * (q - 1.0) * std::exp(-x));
  };
  return Nonlinearity("paper_critical", {{"lambda", lambda}, {"q", q}, {"alpha0", a0}},
                      Growth{GrowthClass::critical, a0}, std::move(fns));
}

Nonlinearity build(const ExpPower& spec) {
  const double a0 = spec.alpha0, nu = spec.nu;
  require(std::isfinite(a0) && a0 > 0.0, "exp_power: alpha0 must be positive");
  require(std::isfinite(nu) && nu > 0.0, "exp_power: nu must be positive");
  Nonlinearity::Functions fns;
  fns.f = [=](double s) { return s * s * s * std::exp(a0 * std::pow(std::abs(s), nu)); };
  fns.fprime = [=](double s) {
    const double a = std::abs(s);
    const double x = a0 * std::pow(a, nu);
    return a * a * std::exp(x) * (3.0 + nu * x);
  };
  auto table = std::make_shared<const PrimitiveTable>(fns.f, fns.fprime, table_end(a0, nu));
  fns.F = [table](double s) { return (*table)(s); };
  fns.log_abs_f = [=](double s) {
    const double a = std::abs(s);
    return 3.0 * std::log(a) + a0 * std::pow(a, nu);
  };
  fns.log_abs_fprime_s = [=](double s) {
    const double a = std::abs(s);
    const double x = a0 * std::pow(a, nu);
    return 3.0 * std::log(a) + x + std::log(3.0 + nu * x);
  };
  Growth g;
  if (nu < 2.0) g = {GrowthClass::subcritical, 0.0};
  else if (nu == 2.0) g = {GrowthClass::critical, a0};
  else g = {GrowthClass::supercritical, 0.0};
  return Nonlinearity("exp_power", {{"alpha0", a0}, {"nu", nu}}, g, std::move(fns));
}

// log(e^{x} - 1) for x > 0 without overflow.
double log_expm1(double x) {
  if (x > 30.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

Trend trend_of(const std::vector<double>& r) {
  std::size_t up = 0, down = 0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] > r[i - 1]) ++up;
    else if (r[i] < r[i - 1]) ++down;
  }
  const std::size_t steps = r.size() - 1;
  if (down == steps) return Trend::decaying;
  if (up == steps) return Trend::diverging;
  // Eventually monotone: the last quarter agrees on a direction.
  const std::size_t from = r.size() - std::max<std::size_t>(2, r.size() / 4);
  bool all_down = true, all_up = true;
  for (std::size_t i = from + 1; i < r.size(); ++i) {
    all_down = all_down && r[i] < r[i - 1];
    all_up = all_up && r[i] > r[i - 1];
  }
  if (all_down) return Trend::decaying;
  if (all_up) return Trend::diverging;
  return Trend::indeterminate;
}

class CheckBuilder {
public:
  explicit CheckBuilder(std::string name) { result_.name = std::move(name); }
  void expect(bool ok, double s, double value) {
    if (ok) return;
    result_.pass = false;
    ++result_.violations;
    if (result_.witnesses.size() < kMaxWitnesses) result_.witnesses.push_back({s, value});
  }
  CheckResult done() { return std::move(result_); }

private:
  CheckResult result_;
};

}  // namespace

std::string describe(const Growth& g) {
  std::ostringstream os;
  switch (g.kind) {
    case GrowthClass::subcritical: os << "subcritical"; break;
    case GrowthClass::critical: os << "critical(alpha0=" << g.alpha0 << ")"; break;
    case GrowthClass::supercritical: os << "supercritical"; break;
  }
  return os.str();
}

Nonlinearity::Nonlinearity(std::string family, std::vector<std::pair<std::string, double>> params, Growth declared,
                           Functions fns)
    : family_(std::move(family)), params_(std::move(params)), growth_(declared), fns_(std::move(fns)) {
  if (!fns_.f || !fns_.F || !fns_.fprime) throw std::invalid_argument("nonlinearity: f, F and f' are required");
}

double Nonlinearity::log_abs_f(double s) const {
  if (fns_.log_abs_f) return fns_.log_abs_f(s);
  return std::log(std::abs(fns_.f(s)));
}

double Nonlinearity::log_abs_fprime_s(double s) const {
  if (fns_.log_abs_fprime_s) return fns_.log_abs_fprime_s(s);
  return std::log(std::abs(fns_.fprime(s) * s));
}

double Nonlinearity::param(const std::string& name) const {
  for (const auto& [k, v] : params_)
    if (k == name) return v;
  throw std::out_of_range("nonlinearity " + family_ + " has no parameter " + name);
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << family_ << "(";
  for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? ", " : "") << params_[i].first << "=" << params_[i].second;
  os << ")";
  return os.str();
}

Nonlinearity make_builtin(const BuiltinSpec& spec) {
  return std::visit([](const auto& s) { return build(s); }, spec);
}

double hfun(const Nonlinearity& nl, double s) { return s * nl.eval_f(s) - 2.0 * nl.eval_F(s); }

double exp_moment_series(double alpha, double w, double k) {
  if (w == 0.0) return 0.0;
  const double x = alpha * w;
  double term = std::pow(w, k);
  double sum = term / k;
  const long cap = 100000;
  for (long j = 1; j < cap; ++j) {
    term *= x / static_cast<double>(j);
    const double add = term / (static_cast<double>(j) + k);
    sum += add;
    if (!std::isfinite(sum)) return sum;
    if (static_cast<double>(j) > x && add <= 1e-17 * sum) break;
  }
  return 0.5 * sum;
}

std::string Sample::describe() const {
  std::ostringstream os;
  os << points.size() << " points, +-log-spaced on [" << s_min << ", " << s_max << "]";
  return os.str();
}

std::vector<double> Sample::positive() const {
  std::vector<double> out;
  for (double s : points)
    if (s > 0.0) out.push_back(s);
  return out;
}

Sample symmetric_log_sample(double s_min, double s_max, std::size_t per_side) {
  if (!(s_min > 0.0) || !(s_max > s_min) || per_side < 2)
    throw std::invalid_argument("sample: need 0 < s_min < s_max and at least 2 points per side");
  Sample out;
  out.s_min = s_min;
  out.s_max = s_max;
  std::vector<double> pos(per_side);
  const double lr = std::log(s_max / s_min);
  for (std::size_t i = 0; i < per_side; ++i)
    pos[i] = s_min * std::exp(lr * static_cast<double>(i) / static_cast<double>(per_side - 1));
  pos.back() = s_max;
  out.points.reserve(2 * per_side);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.points.push_back(-*it);
  for (double s : pos) out.points.push_back(s);
  return out;
}

std::vector<Witness> HypothesisReport::witness_points() const {
  std::vector<Witness> out;
  for (const auto& c : checks) out.insert(out.end(), c.witnesses.begin(), c.witnesses.end());
  return out;
}

HypothesisReport audit(const Nonlinearity& nl, const Sample& sample, double theta, double c_q, double q) {
  HypothesisReport rep;
  rep.theta = theta;
  rep.c_q = c_q;
  rep.q = q;
  rep.growth_class = nl.declared_growth();
  rep.sample = sample.describe();
  const std::vector<double> pos = sample.positive();
  constexpr double rtol = 1e-12;

  CheckBuilder odd("f1_odd");
  for (double s : sample.points) {
    const double a = nl.eval_f(s), b = nl.eval_f(-s);
    odd.expect(std::abs(a + b) <= 1e-14 * std::abs(a), s, a + b);
  }

  CheckBuilder tail("f1_small_s");
  if (pos.size() >= 2) {
    // Log-log slope of f(s)/s over the first decade of the sample.
    const double s0 = pos.front();
    double s1 = pos.back();
    for (double s : pos)
      if (s >= 10.0 * s0) {
        s1 = s;
        break;
      }
    const double slope =
        (std::log(std::abs(nl.eval_f(s1) / s1)) - std::log(std::abs(nl.eval_f(s0) / s0))) / std::log(s1 / s0);
    tail.expect(slope > 1e-3, s0, slope);
  }

  CheckBuilder primitive("f1_primitive");
  for (double s : pos) {
    // Step on the scale over which f varies, so truncation stays O(1e-10).
    const double f = nl.eval_f(s);
    const double eps = 1e-5 * std::min(s, std::abs(f / nl.eval_fprime(s)));
    const double fd = (nl.eval_F(s + eps) - nl.eval_F(s - eps)) / (2.0 * eps);
    primitive.expect(std::abs(fd - f) <= 1e-6 * std::abs(f), s, fd - f);
  }

  CheckBuilder convex("f1_midpoint_convex");
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t k = 1; k <= 8 && i + k < pos.size(); ++k) {
      const double a = pos[i], b = pos[i + k];
      const double fa = nl.eval_f(a), fb = nl.eval_f(b);
      const double gap = nl.eval_f(0.5 * (a + b)) - 0.5 * (fa + fb);
      convex.expect(gap <= rtol * std::max(std::abs(fa), std::abs(fb)), 0.5 * (a + b), gap);
    }
  }

  CheckBuilder mono("f2_quotient_increasing");
  for (std::size_t i = 1; i < pos.size(); ++i) {
    const double r0 = nl.eval_f(pos[i - 1]) / pos[i - 1];
    const double r1 = nl.eval_f(pos[i]) / pos[i];
    mono.expect(r1 > r0, pos[i], r1 - r0);
  }

  CheckBuilder f3("f3_lower_bound");
  for (double s : sample.points) {
    const double F = nl.eval_F(s);
    const double bound = c_q * std::pow(std::abs(s), q);
    f3.expect(F >= bound * (1.0 - rtol), s, F - bound);
  }

  CheckBuilder ar("AR");
  for (double s : sample.points) {
    const double lhs = theta * nl.eval_F(s);
    const double rhs = s * nl.eval_f(s);
    ar.expect(lhs <= rhs * (1.0 + rtol), s, lhs - rhs);
  }
  if (!(theta > 2.0)) ar.expect(false, 0.0, theta);

  CheckBuilder sup("superlinear_derivative");
  CheckBuilder fp("fprime_positive");
  CheckBuilder hpos("H_positive");
  CheckBuilder heven("H_even");
  for (double s : sample.points) {
    const double f = nl.eval_f(s), d = nl.eval_fprime(s);
    const double v = s * s * d - s * f;
    sup.expect(v > 0.0, s, v);
    fp.expect(d > 0.0, s, d);
    const double H = hfun(nl, s);
    hpos.expect(H > 0.0, s, H);
    const double Hm = hfun(nl, -s);
    heven.expect(std::abs(H - Hm) <= 1e-12 * std::abs(H), s, H - Hm);
  }

  CheckBuilder hinc("H_increasing");
  for (std::size_t i = 1; i < pos.size(); ++i) {
    const double d = hfun(nl, pos[i]) - hfun(nl, pos[i - 1]);
    hinc.expect(d > 0.0, pos[i], d);
  }

  CheckBuilder hray("H_ray");
  for (double s : sample.points) {
    for (double l : {0.25, 0.5, 0.9}) {
      const double d = hfun(nl, s) - hfun(nl, l * s);
      hray.expect(d > 0.0, s, d);
    }
  }

  for (auto* c : {&odd, &tail, &primitive, &convex}) {
    rep.checks.push_back(c->done());
    rep.f1_pass = rep.f1_pass && rep.checks.back().pass;
  }
  rep.checks.push_back(mono.done());
  rep.f2_pass = rep.checks.back().pass;
  rep.checks.push_back(f3.done());
  rep.f3_pass = rep.checks.back().pass;
  rep.checks.push_back(ar.done());
  rep.ar_pass = rep.checks.back().pass;
  for (auto* c : {&sup, &fp, &hpos, &heven, &hinc, &hray}) {
    rep.checks.push_back(c->done());
    rep.remark_pass = rep.remark_pass && rep.checks.back().pass;
  }
  return rep;
}

const char* to_string(Trend t) noexcept {
  switch (t) {
    case Trend::decaying: return "decaying";
    case Trend::diverging: return "diverging";
    case Trend::indeterminate: return "indeterminate";
  }
  return "?";
}

GrowthEstimate classify_growth(const Nonlinearity& nl, const std::vector<double>& alphas, double s_max) {
  if (!(s_max >= 20.0)) throw std::invalid_argument("classify_growth: s_max must be at least 20");
  if (alphas.empty()) throw std::invalid_argument("classify_growth: empty alpha list");
  for (double a : alphas)
    if (!(a > 0.0)) throw std::invalid_argument("classify_growth: alphas must be positive");
  constexpr std::size_t n = 64;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = 0.5 * s_max * (1.0 + static_cast<double>(i) / static_cast<double>(n - 1));

  std::vector<double> sorted(alphas);
  std::sort(sorted.begin(), sorted.end());
  GrowthEstimate est;
  est.s_max = s_max;
  bool any_diverging = false, any_decaying = false;
  for (double a : sorted) {
    std::vector<double> rf(n), rg(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double base = log_expm1(a * s[i] * s[i]);
      rf[i] = nl.log_abs_f(s[i]) - base;
      rg[i] = nl.log_abs_fprime_s(s[i]) - base;
    }
    AlphaTrend t{a, trend_of(rf), trend_of(rg), rf.back()};
    // Both f and f's must be dominated for the ratio to count as decaying.
    const bool diverging = t.f_ratio == Trend::diverging || t.fprime_s_ratio == Trend::diverging;
    const bool decaying = t.f_ratio == Trend::decaying && t.fprime_s_ratio == Trend::decaying;
    if (diverging) {
      any_diverging = true;
      est.alpha0_lower = std::max(est.alpha0_lower, a);
    }
    if (decaying && !any_decaying) {
      any_decaying = true;
      est.alpha0_upper = a;
    }
    est.per_alpha.push_back(t);
  }
  if (!any_diverging) est.inferred = GrowthClass::subcritical;
  else if (any_decaying) est.inferred = GrowthClass::critical;
  else est.inferred = GrowthClass::supercritical;
  return est;
}

double estimate_cq(const Nonlinearity& nl, double q, const Sample& sample) {
  double c = std::numeric_limits<double>::infinity();
  for (double s : sample.positive()) c = std::min(c, nl.eval_F(s) / std::pow(s, q));
  return c;
}

}  // namespace fracgs
