#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fracgs/config.hpp"

namespace fracgs {

namespace exit_code {
constexpr int ok = 0;
constexpr int config = 1;
constexpr int nonconvergence = 2;
constexpr int numeric = 3;
constexpr int check_failed = 4;  // hypothesis audit or oracle/verify check
}  // namespace exit_code

/// Collected results of one command: scalar values, and a pass/fail table.
class RunReport {
public:
  explicit RunReport(std::string command) : command_(std::move(command)) {}

  void value(const std::string& key, double v);
  void value(const std::string& key, const std::string& v);
  void check(const std::string& name, bool pass, const std::string& detail = {});

  bool all_pass() const;
  const std::vector<std::pair<std::string, std::string>>& values() const noexcept { return values_; }

  /// key=value lines, no timestamp (reproducible).
  std::string summary() const;
  /// "PASS|FAIL name detail" lines.
  std::string table() const;
  /// Full report: version, UTC timestamp, config echo, values, table.
  std::string render(const RunConfig& cfg) const;

private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> values_;
  struct Row {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<Row> rows_;
};

const char* version() noexcept;

/// Each command writes into out (created if needed) and prints the table to
/// log. Return values follow exit_code.
int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_audit(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_moser(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_oracle(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Dispatch on run.command; ConfigError maps to exit_code::config.
int run_command(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

}  // namespace fracgs
