#pragma once

#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fracgs {

enum class GrowthClass { subcritical, critical, supercritical };

/// Growth of f at infinity measured against e^{alpha s^2} - 1.
struct Growth {
  GrowthClass kind = GrowthClass::subcritical;
  double alpha0 = 0.0;  // meaningful for critical growth only
};

std::string describe(const Growth& g);

/// The nonlinearity f together with its primitive F (F(0) = 0) and
/// derivative f'. Optional log-space evaluators keep growth diagnostics
/// finite far beyond the overflow threshold of f itself.
class Nonlinearity {
public:
  using ScalarFn = std::function<double(double)>;

  struct Functions {
    ScalarFn f;
    ScalarFn F;
    ScalarFn fprime;
    ScalarFn log_abs_f;         // log|f(s)|, optional
    ScalarFn log_abs_fprime_s;  // log|f'(s) s|, optional
  };

  Nonlinearity(std::string family, std::vector<std::pair<std::string, double>> params, Growth declared,
               Functions fns);

  double eval_f(double s) const { return fns_.f(s); }
  double eval_F(double s) const { return fns_.F(s); }
  double eval_fprime(double s) const { return fns_.fprime(s); }
  double log_abs_f(double s) const;
  double log_abs_fprime_s(double s) const;

  const std::string& family() const noexcept { return family_; }
  const std::vector<std::pair<std::string, double>>& params() const noexcept { return params_; }
  double param(const std::string& name) const;
  const Growth& declared_growth() const noexcept { return growth_; }
  std::string describe() const;

private:
  std::string family_;
  std::vector<std::pair<std::string, double>> params_;
  Growth growth_;
  Functions fns_;
};

/// f(s) = |s|^{p-1} s.
struct PurePower {
  double p = 2.0;
};

/// f(s) = lambda s|s|^{q-2} + |s|^{q-2} s e^{alpha0 s^2}.
struct PaperCritical {
  double lambda = 40.0;
  double q = 4.0;
  double alpha0 = std::numbers::pi / 4.0;
};

/// f(s) = s^3 e^{alpha0 |s|^nu}.
struct ExpPower {
  double alpha0 = 1.0;
  double nu = 2.0;
};

using BuiltinSpec = std::variant<PurePower, PaperCritical, ExpPower>;

/// Throws std::invalid_argument naming the violated hypothesis when a
/// parameter is out of range.
Nonlinearity make_builtin(const BuiltinSpec& spec);

/// H(s) = s f(s) - 2 F(s).
double hfun(const Nonlinearity& nl, double s);

/// (1/2) sum_j alpha^j w^{j+k} / (j! (j+k)) = int_0^{sqrt w} s^{2k-1} e^{alpha s^2} ds.
/// All terms are positive, so the sum is stable for every w >= 0.
double exp_moment_series(double alpha, double w, double k);

struct Sample {
  std::vector<double> points;  // sorted, symmetric about 0, zero excluded
  double s_min = 0.0;
  double s_max = 0.0;
  std::string describe() const;
  std::vector<double> positive() const;
};

/// +-s for s log-spaced on [s_min, s_max] with per_side points.
Sample symmetric_log_sample(double s_min, double s_max, std::size_t per_side);

struct Witness {
  double s = 0.0;
  double value = 0.0;  // the violated quantity at s
};

struct CheckResult {
  std::string name;
  bool pass = true;
  std::size_t violations = 0;
  std::vector<Witness> witnesses;  // first few violations
};

struct HypothesisReport {
  bool f1_pass = true;
  bool f2_pass = true;
  bool f3_pass = true;
  bool ar_pass = true;
  bool remark_pass = true;  // s^2 f' - s f > 0, f' > 0, H > 0, H even/increasing, H(s) > H(ls)
  double theta = 0.0;
  double c_q = 0.0;
  double q = 0.0;
  Growth growth_class;
  std::string sample;
  std::vector<CheckResult> checks;

  bool all_pass() const noexcept { return f1_pass && f2_pass && f3_pass && ar_pass && remark_pass; }
  std::vector<Witness> witness_points() const;
};

/// Pointwise audit of (f1)-(f3), (AR) and the derived properties of f, F
/// and H on the sample. Failures are reported, never thrown.
HypothesisReport audit(const Nonlinearity& nl, const Sample& sample, double theta, double c_q, double q);

enum class Trend { decaying, diverging, indeterminate };
const char* to_string(Trend t) noexcept;

struct AlphaTrend {
  double alpha = 0.0;
  Trend f_ratio = Trend::indeterminate;         // f(s) / (e^{alpha s^2} - 1)
  Trend fprime_s_ratio = Trend::indeterminate;  // f'(s) s / (e^{alpha s^2} - 1)
  double log_ratio_end = 0.0;                   // log of the f ratio at s_max
};

struct GrowthEstimate {
  std::vector<AlphaTrend> per_alpha;
  double alpha0_lower = 0.0;  // largest alpha with a diverging ratio (0 if none)
  double alpha0_upper = std::numeric_limits<double>::infinity();  // smallest decaying alpha
  GrowthClass inferred = GrowthClass::subcritical;
  double s_max = 0.0;
};

/// Empirical growth class from the trend of log f(s) - log(e^{alpha s^2}-1)
/// along the tail [s_max/2, s_max]. Requires s_max >= 20.
GrowthEstimate classify_growth(const Nonlinearity& nl, const std::vector<double>& alphas, double s_max);

/// Largest C with F(s) >= C |s|^q on the sample.
double estimate_cq(const Nonlinearity& nl, double q, const Sample& sample);

}  // namespace fracgs
