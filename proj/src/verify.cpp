#include "fracgs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fracgs/errors.hpp"
#include "fracgs/field_io.hpp"
#include "fracgs/spectral.hpp"

namespace fracgs {

namespace {

double G_of(const Nonlinearity& nl, SplitFunctional g, double s) {
  double v = 0.0;
  switch (g) {
    case SplitFunctional::fu: v = nl.eval_f(s) * s; break;
    case SplitFunctional::F: v = nl.eval_F(s); break;
    case SplitFunctional::H: v = hfun(nl, s); break;
  }
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << to_string(g) << " is not finite at amplitude " << format_double(std::abs(s));
    throw NumericalError(os.str(), std::abs(s));
  }
  return v;
}

constexpr SplitFunctional kFunctionals[] = {SplitFunctional::fu, SplitFunctional::F, SplitFunctional::H};

std::ptrdiff_t to_steps(const GridSpec& g, double d) {
  const double steps = d / g.spacing();
  const double r = std::round(steps);
  if (std::abs(steps - r) > 1e-9 * std::max(1.0, std::abs(r)))
    throw std::invalid_argument("separation " + format_double(d) + " is not a whole number of grid steps");
  return static_cast<std::ptrdiff_t>(r);
}

}  // namespace

const char* to_string(SplitFunctional g) noexcept {
  switch (g) {
    case SplitFunctional::fu: return "fu";
    case SplitFunctional::F: return "F";
    case SplitFunctional::H: return "H";
  }
  return "?";
}

double integral_of(const Field& u, const Nonlinearity& nl, SplitFunctional g) {
  double s = 0.0;
  for (double v : u.values()) s += G_of(nl, g, v);
  return u.grid().spacing() * s;
}

double brezis_lieb_defect(const Field& u, const Field& w, std::ptrdiff_t d_steps, const Nonlinearity& nl,
                          SplitFunctional g) {
  require_same_grid(u, w);
  const Field v = translate_steps(w, d_steps);
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += G_of(nl, g, u[j] + v[j]) - G_of(nl, g, v[j]) - G_of(nl, g, u[j]);
  return std::abs(u.grid().spacing() * s);
}

bool SplitExperiment::monotone() const {
  for (auto fn : kFunctionals) {
    double prev = INFINITY;
    for (const auto& r : rows) {
      if (r.functional != fn) continue;
      if (!(r.defect_normalized < prev)) return false;
      prev = r.defect_normalized;
    }
  }
  return true;
}

double SplitExperiment::final_normalized() const {
  double m = 0.0;
  if (separations.empty()) return m;
  for (const auto& r : rows)
    if (r.d == separations.back()) m = std::max(m, r.defect_normalized);
  return m;
}

bool SplitExperiment::triangle_bound() const {
  for (double d : separations) {
    double fu = 0.0, F = 0.0, H = 0.0;
    for (const auto& r : rows) {
      if (r.d != d) continue;
      if (r.functional == SplitFunctional::fu) fu = r.defect;
      if (r.functional == SplitFunctional::F) F = r.defect;
      if (r.functional == SplitFunctional::H) H = r.defect;
    }
    if (H > (fu + 2.0 * F) * (1.0 + 1e-12) + 1e-300) return false;
  }
  return true;
}

void SplitExperiment::write_csv(std::ostream& out) const {
  out << "d,functional,defect,defect_normalized\n";
  for (const auto& r : rows)
    out << format_double(r.d) << ',' << to_string(r.functional) << ',' << format_double(r.defect) << ','
        << format_double(r.defect_normalized) << '\n';
}

SplitExperiment run_split_experiment(const Field& u, const Field& w, const std::vector<double>& separations,
                                     const Nonlinearity& nl) {
  require_same_grid(u, w);
  SplitExperiment ex;
  ex.separations = separations;
  if (!std::is_sorted(separations.begin(), separations.end()))
    throw std::invalid_argument("separations must be increasing");
  for (double d : separations) {
    const auto steps = to_steps(u.grid(), d);
    const Field un = u + translate_steps(w, steps);
    const double nsq = norms(un).h_half_sq;
    ex.norm_sq.push_back(nsq);
    ex.max_norm = std::max(ex.max_norm, std::sqrt(nsq));
    for (auto fn : kFunctionals) {
      const double defect = brezis_lieb_defect(u, w, steps, nl, fn);
      ex.rows.push_back({d, fn, defect, defect / nsq});
    }
  }
  return ex;
}

bool EnvelopeReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const EnvelopeCheck& c) { return c.holds; });
}

EnvelopeReport growth_envelope_check(const Nonlinearity& nl, double alpha, double D, double q, const Sample& sample) {
  if (!(alpha > 0.0) || !(q > 1.0)) throw std::invalid_argument("growth_envelope_check: need alpha > 0, q > 1");
  EnvelopeReport rep;
  rep.alpha = alpha;
  rep.D = D;
  rep.q = q;
  rep.sample = sample.describe();

  struct Spec {
    const char* name;
    double (*lhs)(const Nonlinearity&, double);
    bool quadratic;  // s^2 base and |s|^q, else |s| base and |s|^{q-1}
  };
  const Spec specs[] = {
      {"F", [](const Nonlinearity& n, double s) { return n.eval_F(s); }, true},
      {"G", [](const Nonlinearity& n, double s) { return n.eval_f(s) * s; }, true},
      {"f", [](const Nonlinearity& n, double s) { return std::abs(n.eval_f(s)); }, false},
      {"fprime_s", [](const Nonlinearity& n, double s) { return std::abs(n.eval_fprime(s) * s); }, false},
  };
  for (const auto& sp : specs) {
    EnvelopeCheck c;
    c.name = sp.name;
    for (double s : sample.points) {
      const double a = std::abs(s);
      const double lhs = sp.lhs(nl, s);
      const double base = (sp.quadratic ? a * a : a) + std::expm1(alpha * a * a);
      const double power = std::pow(a, sp.quadratic ? q : q - 1.0);
      if (!std::isfinite(lhs) || !std::isfinite(base)) {
        ++c.unevaluated;
        continue;
      }
      if (power > 0.0) c.min_D = std::max(c.min_D, (lhs - base) / power);
      const double rhs = base + D * power;
      if (lhs > rhs * (1.0 + 1e-12)) {
        c.holds = false;
        if (c.witnesses.size() < 5) c.witnesses.push_back({s, lhs - rhs});
      }
    }
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

SplittingIdentity splitting_identity_check(const Field& u, const Field& w, std::ptrdiff_t d_steps,
                                           const Nonlinearity& nl) {
  require_same_grid(u, w);
  const Field v = translate_steps(w, d_steps);
  const Field un = u + v;
  SplittingIdentity out;
  // Node-by-node local part, so disjoint supports cancel exactly.
  double local = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    local += G_of(nl, SplitFunctional::fu, un[j]) - G_of(nl, SplitFunctional::fu, v[j]) -
             G_of(nl, SplitFunctional::fu, u[j]);
  local *= u.grid().spacing();
  out.norm_part = 2.0 * h_half_inner(u, v);
  out.norm_sq = norms(un).h_half_sq;
  out.local = std::abs(local);
  out.total = std::abs(out.norm_part - local);
  return out;
}

}  // namespace fracgs
