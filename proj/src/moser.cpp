#include "fracgs/moser.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fracgs/errors.hpp"
#include "fracgs/field_io.hpp"
#include "fracgs/spectral.hpp"

namespace fracgs {

double moser_integral(const Field& u, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("moser_integral: alpha must be positive");
  double s = 0.0;
  for (double v : u.values()) {
    const double e = std::expm1(alpha * v * v);
    if (!std::isfinite(e)) {
      std::ostringstream os;
      os << "moser integrand overflows at amplitude " << format_double(std::abs(v));
      throw NumericalError(os.str(), std::abs(v));
    }
    s += e;
  }
  return u.grid().spacing() * s;
}

const char* to_string(TrialFamily f) noexcept {
  switch (f) {
    case TrialFamily::gaussian: return "gaussian";
    case TrialFamily::bump: return "bump";
    case TrialFamily::log_profile: return "log_profile";
  }
  return "?";
}

TrialFamily trial_family_from_string(const std::string& name) {
  if (name == "gaussian") return TrialFamily::gaussian;
  if (name == "bump") return TrialFamily::bump;
  if (name == "log_profile") return TrialFamily::log_profile;
  throw std::invalid_argument("unknown trial family '" + name + "' (gaussian, bump, log_profile)");
}

namespace {

Field shape(const GridSpec& grid, TrialFamily family, double w) {
  switch (family) {
    case TrialFamily::gaussian:
      return Field::sample(grid, [w](double x) { return std::exp(-x * x / (2.0 * w * w)); });
    case TrialFamily::bump:
      return Field::sample(grid, [w](double x) {
        const double r = x / w;
        return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
      });
    case TrialFamily::log_profile: {
      const double scale = std::log(1.0 / w);
      return Field::sample(grid, [w, scale](double x) {
        const double a = std::abs(x);
        if (a <= w) return 1.0;
        if (a >= 1.0) return 0.0;
        return std::log(1.0 / a) / scale;
      });
    }
  }
  return Field::zeros(grid);
}

}  // namespace

Field trial_field(const GridSpec& grid, TrialFamily family, double width, double amplitude) {
  if (!(width > 0.0)) throw std::invalid_argument("trial width must be positive");
  if (family == TrialFamily::log_profile && !(width < 1.0))
    throw std::invalid_argument("log_profile width must lie in (0, 1)");
  Field u = shape(grid, family, width).scaled(amplitude);
  const double semi = gagliardo_seminorm_sq(u);
  if (semi > 1.0) u = u.scaled(1.0 / std::sqrt(semi));
  return u;
}

void MoserProbe::write_csv(std::ostream& out) const {
  out << "trial_id,alpha,seminorm_sq,l2_sq,integral,ratio\n";
  for (const auto& t : trials) {
    if (t.skipped) continue;
    out << t.id << ',' << format_double(alpha) << ',' << format_double(t.seminorm_sq) << ',' << format_double(t.l2_sq)
        << ',' << format_double(t.integral) << ',' << format_double(t.ratio) << '\n';
  }
}

std::string MoserProbe::summary() const {
  std::ostringstream os;
  os << "family=" << to_string(family) << "\n"
     << "family_description=" << description << "\n"
     << "alpha=" << format_double(alpha) << "\n"
     << "trials=" << trials.size() << "\n"
     << "skipped_overflow=" << skipped << "\n"
     << "H_alpha_lower=" << format_double(sup_ratio) << "\n"
     << "concentration_nondecreasing=" << (concentration_nondecreasing ? "true" : "false") << "\n"
     << "concentration_rate=" << format_double(concentration_rate) << "\n"
     << "concentration_trend=" << trend << "\n";
  return os.str();
}

MoserProbe probe_H(const GridSpec& grid, double alpha, TrialFamily family, int budget) {
  if (!(alpha > 0.0)) throw std::invalid_argument("probe_H: alpha must be positive");
  if (budget < 4) throw std::invalid_argument("probe_H: budget must be at least 4");
  MoserProbe probe;
  probe.alpha = alpha;
  probe.family = family;

  const double w_wide = family == TrialFamily::log_profile ? 0.5 : grid.half_width() / 16.0;
  const double w_narrow = 4.0 * grid.spacing();
  if (!(w_narrow < w_wide)) throw std::invalid_argument("probe_H: grid too coarse for the concentration ladder");
  const int n_amp = budget / 2;
  const int n_conc = budget - n_amp;
  std::ostringstream desc;
  desc << to_string(family) << ": " << n_amp << " amplitudes 0.01..1 x unit-seminorm at w=" << format_double(w_wide)
       << "; " << n_conc << " widths " << format_double(w_wide) << ".." << format_double(w_narrow)
       << " at unit seminorm";
  probe.description = desc.str();

  auto unit_amplitude = [&](double w) { return 1.0 / std::sqrt(gagliardo_seminorm_sq(shape(grid, family, w))); };

  int id = 0;
  auto run = [&](double w, double amplitude, bool conc) {
    MoserTrial t;
    t.id = id++;
    t.width = w;
    t.amplitude = amplitude;
    t.concentration = conc;
    const Field u = trial_field(grid, family, w, amplitude);
    const Norms n = norms(u);
    t.seminorm_sq = n.seminorm_sq;
    t.l2_sq = n.l2_sq;
    try {
      t.integral = moser_integral(u, alpha);
      t.ratio = t.integral / t.l2_sq;
    } catch (const NumericalError&) {
      t.skipped = true;
      ++probe.skipped;
    }
    probe.trials.push_back(t);
  };

  const double a_wide = unit_amplitude(w_wide);
  for (int i = 0; i < n_amp; ++i) {
    const double frac = n_amp == 1 ? 1.0 : std::pow(100.0, static_cast<double>(i) / (n_amp - 1) - 1.0);
    run(w_wide, frac * a_wide, false);
  }
  for (int i = 0; i < n_conc; ++i) {
    const double w = w_wide * std::pow(w_narrow / w_wide, static_cast<double>(i) / (n_conc - 1));
    // Slightly above the unit amplitude so the rescale pins the seminorm at 1.
    run(w, 1.01 * unit_amplitude(w), true);
  }

  std::vector<const MoserTrial*> ladder;
  for (const auto& t : probe.trials) {
    if (t.skipped) continue;
    probe.sup_ratio = std::max(probe.sup_ratio, t.ratio);
    if (t.concentration) ladder.push_back(&t);
  }
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i]->ratio < ladder[i - 1]->ratio * (1.0 - 1e-12)) probe.concentration_nondecreasing = false;
  if (ladder.size() >= 2) {
    const auto& a = *ladder[ladder.size() - 2];
    const auto& b = *ladder.back();
    probe.concentration_rate = std::log(b.ratio / a.ratio) / std::log(a.width / b.width);
    const double rel = b.ratio / a.ratio - 1.0;
    if (rel < -1e-12) probe.trend = "decreasing";
    else if (rel < 1e-2) probe.trend = "saturating";
    else probe.trend = "growing";
  } else {
    probe.trend = "n/a";
  }
  return probe;
}

LambdaBoundReport lambda_bound_check(const Field& u, double alpha, double rho0) {
  if (!(alpha > 0.0) || !(rho0 > 0.0)) throw std::invalid_argument("lambda_bound_check: alpha, rho0 must be positive");
  LambdaBoundReport rep;
  rep.norm = std::sqrt(norms(u).h_half_sq);
  if (rep.norm == 0.0 || rep.norm > rho0 * (1.0 + 1e-12)) return rep;
  rep.applicable = true;
  rep.lhs = moser_integral(u, alpha);
  rep.rhs = moser_integral(u.scaled(rho0 / rep.norm), alpha);
  rep.slack = rep.rhs - rep.lhs;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12);
  return rep;
}

}  // namespace fracgs
