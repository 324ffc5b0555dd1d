#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "incdyn/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"incdyn: simulate incentive dynamics on probability simplices and "
               "certify rest-point stability"};
  app.require_subcommand(1);

  std::string config_path;
  std::string csv_path;
  std::string mode;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool quiet = false;

  app.add_option("--out-dir", out_dir, "directory for output files")->capture_default_str();
  app.add_flag("--quiet", quiet, "suppress stdout notices");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "override the config's check.seed");
  app.fallthrough();

  CLI::App* sim = app.add_subcommand("simulate", "integrate the configured dynamic");
  sim->add_option("config", config_path, "JSON run configuration")->required();

  CLI::App* chk = app.add_subcommand("check", "write a stability or validity certificate");
  chk->add_option("--mode", mode, "iss, ess, or validity")
      ->required()
      ->check(CLI::IsMember({"iss", "ess", "validity"}));
  chk->add_option("config", config_path, "JSON run configuration")->required();

  CLI::App* plot = app.add_subcommand("plotdata", "extract plot tables from a trajectory CSV");
  plot->add_option("csv", csv_path, "trajectory CSV produced by simulate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : incdyn::kExitConfigError;
  }

  incdyn::CliOptions opt;
  opt.out_dir = out_dir;
  opt.quiet = quiet;
  if (seed_opt->count() > 0) opt.seed = seed;

  if (sim->parsed()) return incdyn::cmd_simulate(config_path, opt);
  if (chk->parsed()) return incdyn::cmd_check(config_path, mode, opt);
  if (plot->parsed()) return incdyn::cmd_plotdata(csv_path, opt);
  return incdyn::kExitConfigError;
}
