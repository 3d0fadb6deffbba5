#include "fracgs/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fracgs {

namespace {

struct Default {
  const char* key;
  const char* value;
};

// Every accepted key with its default, in echo order.
const Default kDefaults[] = {
    {"run.command", "solve"},
    {"run.seed", "0"},
    {"grid.L", "80"},
    {"grid.N", "4096"},
    {"grid.boundary", "whole_line"},
    {"nonlinearity.family", "pure_power"},
    {"nonlinearity.p", "2"},
    {"nonlinearity.lambda", "40"},
    {"nonlinearity.q", "4"},
    {"nonlinearity.alpha0", "0.78539816339744828"},
    {"nonlinearity.nu", "2"},
    {"solver.init", "gaussian"},
    {"solver.init_width", "2"},
    {"solver.init_amplitude", "auto"},
    {"solver.init_file", ""},
    {"solver.perturbation", "0"},
    {"solver.step", "1"},
    {"solver.shrink", "0.5"},
    {"solver.armijo", "1e-4"},
    {"solver.max_backtracks", "60"},
    {"solver.tol_residual", "1e-8"},
    {"solver.max_iters", "500"},
    {"solver.recenter_every", "10"},
    {"solver.recenter_radius", "5"},
    {"solver.rho0", "1"},
    {"solver.gamma", "1e-3"},
    {"audit.s_min", "1e-6"},
    {"audit.s_max", "8"},
    {"audit.points", "200"},
    {"audit.theta", "auto"},
    {"audit.C_q", "auto"},
    {"audit.q", "auto"},
    {"audit.growth_s_max", "20"},
    {"audit.alphas", "0.1:3.1:0.1"},
    {"moser.alphas", "0.5,1,2"},
    {"moser.family", "gaussian"},
    {"moser.budget", "24"},
    {"moser.rho0", "0.5"},
    {"verify.bump_amplitude", "1"},
    {"verify.bump_sigma", "2"},
    {"verify.bump_center", "-20"},
    {"verify.separations", "10,20,40"},
    {"verify.envelope_alpha", "auto"},
    {"verify.envelope_D", "auto"},
    {"verify.envelope_q", "auto"},
    {"verify.rho0", "1"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

const char* const kSections[] = {"run", "grid", "nonlinearity", "solver", "audit", "moser", "verify"};

}  // namespace

ConfigError::ConfigError(const std::string& what, std::string source, int line, int column)
    : std::runtime_error([&] {
        std::ostringstream os;
        if (line > 0) os << source << ":" << line << ":" << column << ": ";
        else os << source << ": ";
        os << what;
        return os.str();
      }()),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

RunConfig::RunConfig() {
  for (const auto& d : kDefaults) entries_[d.key] = Entry{d.value, "<default>", 0, 0, false};
}

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& d : kDefaults) k.emplace_back(d.key);
    return k;
  }();
  return keys;
}

void RunConfig::fail(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(message, "<config>", 0, 0);
  throw ConfigError(key + ": " + message, it->second.source, it->second.line, it->second.column);
}

void RunConfig::set(const std::string& key, const std::string& value, const std::string& source, int line,
                    int column) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown key '" + key + "'", source, line, column);
  it->second = Entry{value, source, line, column, true};
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value", "--override", 0, 0);
  set(trim(std::string_view(assignment).substr(0, eq)), trim(std::string_view(assignment).substr(eq + 1)),
      "--override", 0, 0);
}

RunConfig RunConfig::parse(std::istream& in, const std::string& source) {
  RunConfig cfg;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const int col = static_cast<int>(first) + 1;
    if (line[first] == '[') {
      const auto close = line.find(']', first);
      if (close == std::string_view::npos) throw ConfigError("unterminated section header", source, line_no, col);
      if (!trim(line.substr(close + 1)).empty())
        throw ConfigError("text after section header", source, line_no, static_cast<int>(close) + 2);
      section = trim(line.substr(first + 1, close - first - 1));
      if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections))
        throw ConfigError("unknown section [" + section + "]", source, line_no, col);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", source, line_no, col);
    if (section.empty()) throw ConfigError("key outside any section", source, line_no, col);
    const std::string key = trim(line.substr(first, eq - first));
    if (key.empty()) throw ConfigError("empty key", source, line_no, col);
    const std::string value = trim(line.substr(eq + 1));
    cfg.set(section + "." + key, value, source, line_no, col);
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file", path.string(), 0, 0);
  return parse(in, path.string());
}

bool RunConfig::is_default(const std::string& key) const { return !entries_.at(key).user; }

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown key '" + key + "'", "<api>", 0, 0);
  return it->second.value;
}

bool RunConfig::is_auto(const std::string& key) const { return get(key) == "auto"; }

double RunConfig::get_double(const std::string& key) const {
  double v = 0.0;
  if (!parse_number(get(key), v) || !std::isfinite(v)) fail(key, "expected a finite number, got '" + get(key) + "'");
  return v;
}

long long RunConfig::get_int(const std::string& key) const {
  const std::string& s = get(key);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
  return v;
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
  const std::string& s = get(key);
  std::vector<double> out;
  // start:stop:step (inclusive, stop rounded to the nearest step).
  if (s.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) {
      double v = 0.0;
      if (!parse_number(trim(item), v)) fail(key, "bad range '" + s + "'");
      parts.push_back(v);
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) fail(key, "range must be start:stop:step");
    const auto count = static_cast<long long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    for (long long i = 0; i < count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_number(trim(item), v)) fail(key, "bad list entry '" + trim(item) + "'");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  for (const char* sec : kSections) {
    os << "[" << sec << "]\n";
    const std::string prefix = std::string(sec) + ".";
    for (const auto& d : kDefaults) {
      const std::string key = d.key;
      if (key.rfind(prefix, 0) != 0) continue;
      os << key.substr(prefix.size()) << " = " << entries_.at(key).value << "\n";
    }
  }
  return os.str();
}

GridSpec RunConfig::grid() const {
  const double L = get_double("grid.L");
  const long long N = get_int("grid.N");
  const std::string& b = get("grid.boundary");
  Boundary boundary = Boundary::whole_line;
  if (b == "periodic") boundary = Boundary::periodic;
  else if (b != "whole_line") fail("grid.boundary", "expected whole_line or periodic");
  if (N < 0) fail("grid.N", "must be positive");
  try {
    return GridSpec(L, static_cast<std::size_t>(N), boundary);
  } catch (const std::invalid_argument& e) {
    fail("grid.N", e.what());
  }
}

BuiltinSpec RunConfig::nonlinearity() const {
  const std::string& family = get("nonlinearity.family");
  std::vector<std::string> allowed;
  BuiltinSpec spec;
  if (family == "pure_power") {
    allowed = {"p"};
    spec = PurePower{get_double("nonlinearity.p")};
  } else if (family == "paper_critical") {
    allowed = {"lambda", "q", "alpha0"};
    spec = PaperCritical{get_double("nonlinearity.lambda"), get_double("nonlinearity.q"),
                         get_double("nonlinearity.alpha0")};
  } else if (family == "exp_power") {
    allowed = {"alpha0", "nu"};
    spec = ExpPower{get_double("nonlinearity.alpha0"), get_double("nonlinearity.nu")};
  } else {
    fail("nonlinearity.family", "expected pure_power, paper_critical or exp_power");
  }
  for (const char* p : {"p", "lambda", "q", "alpha0", "nu"}) {
    const std::string key = std::string("nonlinearity.") + p;
    if (!is_default(key) && std::find(allowed.begin(), allowed.end(), p) == allowed.end())
      fail(key, "parameter does not apply to family " + family);
  }
  try {
    (void)make_builtin(spec);
  } catch (const std::invalid_argument& e) {
    fail("nonlinearity.family", e.what());
  }
  return spec;
}

SolveConfig RunConfig::solve_config() const {
  SolveConfig c;
  c.grid = grid();
  c.nl = nonlinearity();
  const std::string& init = get("solver.init");
  if (init == "gaussian") c.init = InitKind::gaussian;
  else if (init == "bump") c.init = InitKind::bump;
  else if (init == "file") c.init = InitKind::file;
  else fail("solver.init", "expected gaussian, bump or file");
  c.init_width = get_double("solver.init_width");
  c.init_amplitude = is_auto("solver.init_amplitude") ? 0.0 : get_double("solver.init_amplitude");
  c.init_file = get("solver.init_file");
  c.perturbation = get_double("solver.perturbation");
  const long long seed = get_int("run.seed");
  if (seed < 0) fail("run.seed", "must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.step = get_double("solver.step");
  c.shrink = get_double("solver.shrink");
  c.armijo = get_double("solver.armijo");
  c.max_backtracks = static_cast<int>(get_int("solver.max_backtracks"));
  c.tol_residual = get_double("solver.tol_residual");
  c.max_iters = static_cast<int>(get_int("solver.max_iters"));
  c.recenter_every = static_cast<int>(get_int("solver.recenter_every"));
  c.recenter_radius = get_double("solver.recenter_radius");
  c.rho0 = get_double("solver.rho0");
  c.gamma = get_double("solver.gamma");
  if (!is_auto("solver.init_amplitude") && !(c.init_amplitude > 0.0))
    fail("solver.init_amplitude", "must be positive or auto");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), "<config>", 0, 0);
  }
  return c;
}

}  // namespace fracgs
