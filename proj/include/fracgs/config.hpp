#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracgs/grid.hpp"
#include "fracgs/nonlinearity.hpp"
#include "fracgs/solver.hpp"

namespace fracgs {

/// A configuration problem, located at (line, column) of its source when
/// it comes from a file. Line 0 means a command-line override.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& what, std::string source, int line, int column);
  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  std::string source_;
  int line_;
  int column_;
};

/// Flat "section.key" -> value store seeded with every default. Config
/// files use INI syntax:
///
///   # comment
///   [grid]
///   L = 80
///
/// Keys outside the known set are rejected.
class RunConfig {
public:
  RunConfig();

  static RunConfig parse(std::istream& in, const std::string& source = "<config>");
  static RunConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value, const std::string& source = "<api>", int line = 0,
           int column = 0);
  /// "section.key=value".
  void apply_override(const std::string& assignment);

  bool is_default(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;
  /// "auto" or a number.
  bool is_auto(const std::string& key) const;

  /// All resolved values as INI text, sections in a fixed order.
  std::string echo() const;

  std::string command() const { return get("run.command"); }
  GridSpec grid() const;
  /// Rejects parameters that do not belong to the chosen family.
  BuiltinSpec nonlinearity() const;
  SolveConfig solve_config() const;

  static const std::vector<std::string>& known_keys();

private:
  struct Entry {
    std::string value;
    std::string source;
    int line = 0;
    int column = 0;
    bool user = false;
  };
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

  std::map<std::string, Entry> entries_;
};

}  // namespace fracgs
