// fracgs: ground states of (-Delta)^{1/2} u + u = f(u) on the line.
//
//   fracgs [solve|audit|moser|verify|oracle] [--config PATH] [--out DIR]
//          [--override section.key=value]...
//
// The positional command, when given, overrides run.command.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracgs/commands.hpp"
#include "fracgs/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nehari-manifold ground states for the half-Laplacian scalar field equation"};
  app.set_version_flag("--version", std::string(fracgs::version()));

  std::string command;
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  app.add_option("command", command, "solve, audit, moser, verify or oracle")
      ->check(CLI::IsMember({"solve", "audit", "moser", "verify", "oracle"}));
  app.add_option("--config,-c", config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--out,-o", out_dir, "output directory")->capture_default_str();
  app.add_option("--override,-s", overrides, "section.key=value, repeatable")->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fracgs::exit_code::config;
  }

  try {
    fracgs::RunConfig cfg = config_path.empty() ? fracgs::RunConfig() : fracgs::RunConfig::load(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    if (!command.empty()) cfg.set("run.command", command, "<argv>");
    return fracgs::run_command(cfg, out_dir, std::cout);
  } catch (const fracgs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return fracgs::exit_code::config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fracgs::exit_code::numeric;
  }
}
