#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "incdyn/config.hpp"
#include "incdyn/dynamics.hpp"
#include "incdyn/errors.hpp"
#include "incdyn/io.hpp"
#include "incdyn/stability.hpp"

namespace incdyn {

/// Exit-code contract shared by every command:
/// 0 success / true verdict, 1 false verdict, 2 config error, 3 runtime failure.
enum ExitCode : int {
  kExitOk = 0,
  kExitFalseVerdict = 1,
  kExitConfigError = 2,
  kExitRuntimeError = 3,
};

struct CliOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides check.seed from the config
  bool quiet = false;
};

namespace detail {

inline void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory: " + dir);
}

inline std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline std::uint64_t resolve_seed(const RunConfig& cfg, const CliOptions& opt) {
  if (opt.seed) return *opt.seed;
  if (cfg.check.seed) return *cfg.check.seed;
  throw ConfigError("config: sampling command needs check.seed (or --seed)");
}

}  // namespace detail

/// Integrates every configured initial state and writes one trajectory CSV
/// per state plus a human-readable summary file.
inline int cmd_simulate(const std::string& config_path, const CliOptions& opt = {}) {
  try {
    const RunConfig cfg = load_run_config(config_path);
    if (cfg.initial_states.empty())
      throw ConfigError("config: simulate needs at least one entry in initial_states");
    detail::ensure_out_dir(opt.out_dir);

    std::ostringstream summary;
    summary << "config_hash: " << cfg.config_hash << "\n"
            << "game: " << cfg.game.describe() << "\n"
            << "incentive: " << cfg.incentive.name() << "\n"
            << "trajectories: " << cfg.initial_states.size() << "\n";

    for (std::size_t k = 0; k < cfg.initial_states.size(); ++k) {
      const Trajectory traj =
          integrate(cfg.game, cfg.incentive, cfg.initial_states[k], cfg.solver, cfg.target);
      const std::string csv_name = cfg.output_prefix + "_traj_" + std::to_string(k) + ".csv";
      write_trajectory_csv(detail::join_path(opt.out_dir, csv_name), traj);

      summary << "[" << k << "] file: " << csv_name
              << " records: " << traj.record_count()
              << " final: " << detail::format_profile(traj.states.back());
      if (traj.monitored())
        summary << " V_start: " << detail::fmt17(traj.lyapunov.front())
                << " V_end: " << detail::fmt17(traj.lyapunov.back());
      summary << "\n";
    }

    const std::string summary_path =
        detail::join_path(opt.out_dir, cfg.output_prefix + "_summary.txt");
    detail::write_text_file(summary_path, summary.str());
    if (!opt.quiet) std::cout << summary.str();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

/// Runs one of the certificate modes (iss, ess, validity), writes the
/// certificate file, and exits 0/1 with the verdict.
inline int cmd_check(const std::string& config_path, const std::string& mode,
                     const CliOptions& opt = {}) {
  try {
    const RunConfig cfg = load_run_config(config_path);
    const std::uint64_t seed = detail::resolve_seed(cfg, opt);
    detail::ensure_out_dir(opt.out_dir);
    const std::string cert_path =
        detail::join_path(opt.out_dir, cfg.output_prefix + "_" + mode + "_certificate.txt");

    bool verdict = false;
    if (mode == "iss" || mode == "ess") {
      if (!cfg.target)
        throw ConfigError("config: check --mode " + mode + " needs a 'target' candidate");
      try {
        if (mode == "iss") {
          const IssCertificate cert =
              check_iss(cfg.game, cfg.incentive, *cfg.target, cfg.check.radius,
                        cfg.check.samples, seed, cfg.check.min_component);
          write_iss_certificate(cert_path, cert, cfg.config_hash);
          verdict = cert.verdict;
        } else {
          const EssCertificate cert = check_ess(cfg.game, *cfg.target, cfg.check.radius,
                                                cfg.check.samples, seed, cfg.check.min_component);
          write_ess_certificate(cert_path, cert, cfg.config_hash);
          verdict = cert.verdict;
        }
      } catch (const BoundaryCenter& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
    } else if (mode == "validity") {
      const ValidityReport report =
          validate_incentive(cfg.incentive, cfg.game, cfg.check.samples, seed);
      write_validity_certificate(cert_path, report, cfg.incentive.name(), cfg.game.describe(),
                                 seed, cfg.config_hash);
      verdict = report.verdict;
    } else {
      throw ConfigError("check: mode must be iss, ess, or validity");
    }

    if (!opt.quiet)
      std::cout << mode << " verdict: " << (verdict ? "true" : "false") << " (" << cert_path
                << ")\n";
    return verdict ? kExitOk : kExitFalseVerdict;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

/// Turns a trajectory CSV into plain-text plot tables: ternary coordinates
/// for 3-strategy single-population runs and a (t, V) series when the run
/// was monitored.
inline int cmd_plotdata(const std::string& csv_path, const CliOptions& opt = {}) {
  try {
    const CsvTable table = read_csv(csv_path);
    detail::ensure_out_dir(opt.out_dir);
    const std::string stem = std::filesystem::path(csv_path).stem().string();

    // Single population with three strategies: columns x0_0..x0_2, no x1_*.
    const bool ternary_ok = table.has_column("x0_0") && table.has_column("x0_1") &&
                            table.has_column("x0_2") && !table.has_column("x0_3") &&
                            !table.has_column("x1_0");
    if (ternary_ok) {
      const std::size_t c1 = table.column_index("x0_1");
      const std::size_t c2 = table.column_index("x0_2");
      std::ostringstream out;
      out << "# u v\n";
      for (const auto& row : table.rows) {
        // Affine map with corners (0,0), (1,0), (1/2, sqrt(3)/2).
        const double u = row[c1] + 0.5 * row[c2];
        const double v = 0.86602540378443865 * row[c2];
        out << detail::fmt17(u) << " " << detail::fmt17(v) << "\n";
      }
      const std::string path = detail::join_path(opt.out_dir, stem + "_ternary.dat");
      detail::write_text_file(path, out.str());
      if (!opt.quiet) std::cout << "wrote " << path << "\n";
    } else if (!opt.quiet) {
      std::cout << "ternary data skipped: not a 3-strategy single-population trajectory\n";
    }

    if (table.has_column("V")) {
      const std::size_t cv = table.column_index("V");
      std::ostringstream out;
      out << "# t V\n";
      for (const auto& row : table.rows)
        out << detail::fmt17(row[0]) << " " << detail::fmt17(row[cv]) << "\n";
      const std::string path = detail::join_path(opt.out_dir, stem + "_v.dat");
      detail::write_text_file(path, out.str());
      if (!opt.quiet) std::cout << "wrote " << path << "\n";
    } else if (!opt.quiet) {
      std::cout << "V data skipped: trajectory was not monitored\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace incdyn
