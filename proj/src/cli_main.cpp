#include "ferro/config.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace ferro {

namespace {

std::string with_out_dir(const std::string& dir, const std::string& path) {
  if (path.empty() || dir.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"ferrosim - rate-independent ferroelectric polarization solver"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run a configuration file");
  std::string config_path;
  std::string out_dir;
  std::string log_level = "info";
  double tol = -1.0;
  double reg_eps = -1.0;
  long long seed = -1;
  run_cmd->add_option("config", config_path, "configuration file")->required();
  run_cmd->add_option("--tol", tol, "Newton tolerance override");
  run_cmd->add_option("--reg-eps", reg_eps, "dissipation regularization override");
  run_cmd->add_option("--out-dir", out_dir, "directory for relative output paths");
  run_cmd->add_option("--seed", seed, "seed recorded for randomized tooling");
  run_cmd->add_option("--log-level", log_level, "quiet|info|debug")
      ->check(CLI::IsMember({"quiet", "info", "debug"}));

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (tol > 0.0) cfg.solver.tol = tol;
  if (reg_eps > 0.0) cfg.material.reg_eps = reg_eps;
  if (seed >= 0) cfg.seed = static_cast<unsigned>(seed);
  cfg.output.csv = with_out_dir(out_dir, cfg.output.csv);
  cfg.output.vtk_prefix = with_out_dir(out_dir, cfg.output.vtk_prefix);
  cfg.output.iteration_log = with_out_dir(out_dir, cfg.output.iteration_log);

  std::ostream* log = log_level == "quiet" ? nullptr : &std::cerr;
  const RunOutcome outcome = run(cfg, log);
  if (outcome.exit_code != 0) std::cerr << "error: " << outcome.message << "\n";
  return outcome.exit_code;
}

}  // namespace ferro
