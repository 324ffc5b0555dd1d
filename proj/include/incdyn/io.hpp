#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "incdyn/dynamics.hpp"
#include "incdyn/errors.hpp"
#include "incdyn/incentives.hpp"
#include "incdyn/stability.hpp"

namespace incdyn {

namespace detail {

/// Full-precision formatting (17 significant digits) so downstream
/// finite-difference checks are not quantization-limited.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_weights(const std::vector<double>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += ",";
    out += fmt17(w[i]);
  }
  return out;
}

inline std::string format_raw_profile(const RawProfile& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out += ";";
    out += format_weights(x[i]);
  }
  return out;
}

inline std::string format_profile(const StateProfile& x) { return format_raw_profile(x.raw()); }

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace detail

/// FNV-1a 64-bit hash of a byte string, as 16 hex digits. Certificates
/// embed the hash of the raw config file so results are traceable to the
/// exact inputs.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Columns: t, then x_{i,a} for all populations/strategies in declaration
/// order, then V and Vdot when the run was monitored.
inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ostringstream out;
  out << "t";
  const auto counts = traj.states.front().strategy_counts();
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t a = 0; a < counts[i]; ++a) out << ",x" << i << "_" << a;
  if (traj.monitored()) out << ",V,Vdot";
  out << "\n";
  for (std::size_t k = 0; k < traj.record_count(); ++k) {
    out << detail::fmt17(traj.times[k]);
    for (std::size_t i = 0; i < counts.size(); ++i)
      for (std::size_t a = 0; a < counts[i]; ++a)
        out << "," << detail::fmt17(traj.states[k][i][a]);
    if (traj.monitored())
      out << "," << detail::fmt17(traj.lyapunov[k]) << ","
          << detail::fmt17(traj.lyapunov_rate[k]);
    out << "\n";
  }
  detail::write_text_file(path, out.str());
}

/// In-memory CSV, used by the plot-data command.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw ConfigError("csv: missing column " + name);
  }
  bool has_column(const std::string& name) const {
    for (const auto& c : columns)
      if (c == name) return true;
    return false;
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open csv: " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv is empty: " + path);
  std::stringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  if (table.columns.empty() || table.columns.front() != "t")
    throw ConfigError("csv: first column must be t");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ConfigError("csv: non-numeric cell '" + cell + "'");
      }
      if (used != cell.size()) throw ConfigError("csv: malformed cell '" + cell + "'");
      values.push_back(v);
    }
    if (values.size() != table.columns.size())
      throw ConfigError("csv: row width does not match header");
    table.rows.push_back(std::move(values));
  }
  if (table.rows.empty()) throw ConfigError("csv has no data rows: " + path);
  return table;
}

namespace detail {

inline void append_violations(std::ostringstream& out,
                              const std::vector<MarginViolation>& violations) {
  out << "violations: " << violations.size() << "\n";
  const std::size_t shown = std::min<std::size_t>(violations.size(), 10);
  for (std::size_t i = 0; i < shown; ++i)
    out << "violation[" << i << "]: sample=" << violations[i].sample_index
        << " margin=" << fmt17(violations[i].margin)
        << " state=" << format_profile(violations[i].state) << "\n";
  if (violations.size() > shown)
    out << "violation[...]: " << violations.size() - shown << " more omitted\n";
}

}  // namespace detail

inline void write_iss_certificate(const std::string& path, const IssCertificate& cert,
                                  const std::string& config_hash) {
  std::ostringstream out;
  out << "kind: iss\n"
      << "game: " << cert.game_id << "\n"
      << "incentive: " << cert.incentive_id << "\n"
      << "config_hash: " << config_hash << "\n"
      << "candidate: " << detail::format_profile(cert.candidate) << "\n"
      << "radius: " << detail::fmt17(cert.radius) << "\n"
      << "samples: " << cert.sample_count << "\n"
      << "seed: " << cert.seed << "\n"
      << "min_margin: " << detail::fmt17(cert.min_margin) << "\n"
      << "verdict: " << (cert.verdict ? "true" : "false") << "\n";
  detail::append_violations(out, cert.violations);
  detail::write_text_file(path, out.str());
}

inline void write_ess_certificate(const std::string& path, const EssCertificate& cert,
                                  const std::string& config_hash) {
  std::ostringstream out;
  out << "kind: ess\n"
      << "game: " << cert.game_id << "\n"
      << "config_hash: " << config_hash << "\n"
      << "candidate: " << detail::format_profile(cert.candidate) << "\n"
      << "radius: " << detail::fmt17(cert.radius) << "\n"
      << "samples: " << cert.sample_count << "\n"
      << "seed: " << cert.seed << "\n"
      << "min_gap: " << detail::fmt17(cert.min_gap) << "\n"
      << "verdict: " << (cert.verdict ? "true" : "false") << "\n";
  detail::append_violations(out, cert.violations);
  detail::write_text_file(path, out.str());
}

inline void write_validity_certificate(const std::string& path, const ValidityReport& report,
                                       const std::string& incentive_id,
                                       const std::string& game_id, std::uint64_t seed,
                                       const std::string& config_hash) {
  std::ostringstream out;
  out << "kind: validity\n"
      << "game: " << game_id << "\n"
      << "incentive: " << incentive_id << "\n"
      << "config_hash: " << config_hash << "\n"
      << "sampled_states: " << report.sampled_states << "\n"
      << "seed: " << seed << "\n"
      << "verdict: " << (report.verdict ? "true" : "false") << "\n"
      << "violations: " << report.violations.size() << "\n";
  const std::size_t shown = std::min<std::size_t>(report.violations.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& v = report.violations[i];
    out << "violation[" << i << "]: kind="
        << (v.kind == ViolationKind::NegativityAtZero ? "negativity-at-zero"
                                                      : "sum-equals-minus-one")
        << " population=" << v.population;
    if (v.strategy != ValidityViolation::npos) out << " strategy=" << v.strategy;
    out << " value=" << detail::fmt17(v.value)
        << " state=" << detail::format_raw_profile(v.state) << "\n";
  }
  if (report.violations.size() > shown)
    out << "violation[...]: " << report.violations.size() - shown << " more omitted\n";
  detail::write_text_file(path, out.str());
}

}  // namespace incdyn
