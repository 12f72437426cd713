#pragma once

// Command-line harness: run specification, the table/profile commands and
// their CSV/JSON renderings.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qcfk/adaptivity.hpp"
#include "qcfk/report_io.hpp"

namespace qcfk {

enum class Mode { adapt, fixed_k, sweep_k, table1, table2, table3, profile };
enum class OutputFormat { csv, json };

inline const std::map<std::string, Mode>& mode_names() {
  static const std::map<std::string, Mode> names{
      {"adapt", Mode::adapt},   {"fixed-k", Mode::fixed_k}, {"sweep-k", Mode::sweep_k}, {"table1", Mode::table1},
      {"table2", Mode::table2}, {"table3", Mode::table3},   {"profile", Mode::profile}};
  return names;
}

inline std::string to_string(Mode m) {
  for (const auto& [name, mode] : mode_names())
    if (mode == m) return name;
  return "?";
}

/// Raised for bad command lines; the message is meant for the user.
class usage_error : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

/// Raised when --help is given; carries the help text.
class help_requested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSpec {
  Mode mode = Mode::table2;
  std::vector<int> m_list;          // empty: mode default
  std::vector<int> k_list;          // empty: mode default
  double k0 = 1.0;
  double k1 = 2.0;
  double k2 = 2.0;
  double a0 = 1.0;
  std::optional<std::array<double, 4>> bc;  // default: end atoms in their wells
  AdaptConfig config;
  std::vector<double> tau_list;     // table3; empty: 1e-2 .. 1e-14
  OutputFormat format = OutputFormat::csv;
  std::string out_path;             // empty: stdout
  int exact_m_ceiling = 1000000;    // largest M for which the atomistic system is solved

  std::vector<int> chain_lengths() const {
    if (!m_list.empty()) return m_list;
    switch (mode) {
      case Mode::table1: return {100, 1000, 10000, 100000, 1000000};
      case Mode::profile: return {500};
      default: return {1000};
    }
  }

  std::vector<int> k_values() const {
    if (!k_list.empty()) return k_list;
    switch (mode) {
      case Mode::table2:
      case Mode::sweep_k: return {0, 2, 4, 6, 8, 10, 15, 20, 25, 30, 35, 40, 45, 50};
      case Mode::profile: return {20};
      default: return {0};
    }
  }

  std::vector<double> tolerances() const {
    if (!tau_list.empty()) return tau_list;
    std::vector<double> t;
    for (int d = 2; d <= 14; ++d) t.push_back(std::pow(10.0, -d));
    return t;
  }

  ChainParams params(int M) const {
    ChainParams p;
    p.M = M;
    p.k0 = k0;
    p.k1 = k1;
    p.k2 = k2;
    p.a0 = a0;
    p.bc = bc ? *bc : ChainParams::well_boundary(M, a0);
    return p;
  }

  /// Checks every numeric field before any computation starts.
  void validate() const {
    for (int M : chain_lengths()) {
      if (M < 3) throw usage_error("chain half-length M must be at least 3, got " + std::to_string(M));
      try {
        params(M).validate();
      } catch (const invalid_input& e) {
        throw usage_error(e.what());
      }
      if (mode != Mode::table1 && mode != Mode::adapt && mode != Mode::table3)
        for (int K : k_values())
          if (K < 0 || K > M - 2)
            throw usage_error("K=" + std::to_string(K) + " outside 0..M-2 for M=" + std::to_string(M));
    }
    try {
      config.validate();
    } catch (const invalid_input& e) {
      throw usage_error(e.what());
    }
    for (double t : tau_list)
      if (!(t > 0.0)) throw usage_error("tolerances must be positive");
    if (exact_m_ceiling < 3) throw usage_error("exact-error ceiling must be at least 3");
  }
};

inline json to_json(const RunSpec& s) {
  json j;
  j["mode"] = to_string(s.mode);
  j["m"] = s.chain_lengths();
  j["k"] = s.k_values();
  j["k0"] = s.k0;
  j["k1"] = s.k1;
  j["k2"] = s.k2;
  j["a0"] = s.a0;
  j["bc"] = s.bc ? json(*s.bc) : json(nullptr);
  j["tau_gl"] = s.config.tau_gl;
  j["tau_div"] = s.config.tau_div;
  j["max_iterations"] = s.config.max_iterations;
  j["symmetrize"] = s.config.symmetrize;
  j["gamma_split"] = s.config.use_gamma;
  if (s.mode == Mode::table3) j["tau_list"] = s.tolerances();
  j["format"] = s.format == OutputFormat::csv ? "csv" : "json";
  return j;
}

/**
 * Parses `qcfk <mode> [options]`. `args` excludes the program name. A
 * config file given with --config holds flat `key=value` lines using the
 * long option names; explicit flags override it.
 */
inline RunSpec parse_run_spec(const std::vector<std::string>& args) {
  RunSpec spec;
  CLI::App app{"Quasicontinuum Frenkel-Kontorova chain: goal-oriented modelling-error estimation", "qcfk"};
  std::string mode;
  std::string format = "csv";
  std::vector<double> bc;
  std::vector<std::string> mode_list;
  for (const auto& [name, m] : mode_names()) mode_list.push_back(name);

  app.add_option("mode", mode, "adapt | fixed-k | sweep-k | table1 | table2 | table3 | profile")
      ->required()
      ->check(CLI::IsMember(mode_list));
  app.add_option("--m", spec.m_list, "chain half-length M (comma list for table1/adapt)")->delimiter(',');
  app.add_option("--k", spec.k_list, "atomistic half-widths K (comma list)")->delimiter(',');
  app.add_option("--k0", spec.k0, "misfit stiffness");
  app.add_option("--k1", spec.k1, "nearest-neighbour stiffness");
  app.add_option("--k2", spec.k2, "next-nearest-neighbour stiffness");
  app.add_option("--a0", spec.a0, "lattice spacing");
  app.add_option("--bc", bc, "clamped positions of atoms -M+1,-M+2,M-1,M")->delimiter(',')->expected(4);
  app.add_option("--tau-gl", spec.config.tau_gl, "global goal-error tolerance");
  app.add_option("--tau-div", spec.config.tau_div, "per-iteration tolerance divisor (> 1)");
  app.add_option("--max-iter", spec.config.max_iterations, "iteration cap of the adaptive loop");
  app.add_option("--tau-list", spec.tau_list, "tolerances for table3 (comma list)")->delimiter(',');
  app.add_option("--exact-ceiling", spec.exact_m_ceiling, "largest M for which the exact error is computed");
  app.add_flag("--symmetrize", spec.config.symmetrize, "grow the atomistic region as an interval -K+1..K");
  app.add_flag("--gamma-split", spec.config.use_gamma, "gamma-weighted bond indicators");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", spec.out_path, "output file (default stdout)");
  app.set_config("--config", "", "flat key=value configuration file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw help_requested(app.help());
  } catch (const CLI::ParseError& e) {
    throw usage_error(e.what());
  }
  spec.mode = mode_names().at(mode);
  spec.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  if (!bc.empty()) spec.bc = std::array<double, 4>{bc[0], bc[1], bc[2], bc[3]};
  spec.validate();
  return spec;
}

/// Rows plus any mode-specific JSON payload.
struct CommandResult {
  Table table;
  json extra = json::object();
};

inline std::vector<Column> table1_columns() {
  return {{"M", ColumnKind::integer},
          {"iteration", ColumnKind::integer},
          {"K", ColumnKind::integer},
          {"tau_at", ColumnKind::scientific},
          {"eta1", ColumnKind::scientific}};
}

inline std::vector<Column> table2_columns() {
  return {{"K", ColumnKind::integer},      {"abs_Qe", ColumnKind::scientific}, {"eta1", ColumnKind::scientific},
          {"eta1_eff", ColumnKind::ratio}, {"eta2", ColumnKind::scientific},   {"eta2_eff", ColumnKind::ratio}};
}

inline std::vector<Column> table3_columns() {
  return {{"tau_gl", ColumnKind::scientific},
          {"K_opt", ColumnKind::integer},
          {"K_eta1", ColumnKind::integer},
          {"K_eta2", ColumnKind::integer}};
}

inline std::vector<Column> profile_columns() {
  return {{"i", ColumnKind::integer},
          {"eta2_at", ColumnKind::scientific},
          {"eta2_el", ColumnKind::scientific},
          {"eta2_tot", ColumnKind::scientific}};
}

inline std::vector<Column> fixed_k_columns() {
  std::vector<Column> c{{"K", ColumnKind::integer}};
  for (const char* n : {"Qe", "first_term", "sigma_bar", "theta_plus", "theta_minus", "eta_upp_plus", "eta_upp_minus",
                        "eta_low_plus", "eta_low_minus", "bound_low", "bound_high", "eta1", "eta2"})
    c.push_back({n, ColumnKind::scientific});
  return c;
}

/// Errors below this are dominated by rounding in the atomistic solve.
inline constexpr double precision_floor = 1e-13;

/// Adaptive runs for every chain length; one row per iteration.
inline CommandResult cmd_table1(const RunSpec& spec) {
  CommandResult res;
  res.table.columns = table1_columns();
  json traces = json::array();
  for (int M : spec.chain_lengths()) {
    const auto trace = run_adaptive(spec.params(M), spec.config);
    for (const auto& it : trace.iterations)
      res.table.add_row({static_cast<double>(M), static_cast<double>(it.iteration),
                         it.K ? static_cast<double>(*it.K) : std::nan(""), it.tau_at, it.eta1});
    traces.push_back(to_json(trace));
  }
  res.extra["traces"] = traces;
  return res;
}

inline CommandResult cmd_adapt(const RunSpec& spec) { return cmd_table1(spec); }

/// Exact error and both estimators for each K; efficiencies are eta/|Q(e)|.
inline CommandResult cmd_table2(const RunSpec& spec) {
  CommandResult res;
  res.table.columns = table2_columns();
  const int M = spec.chain_lengths().front();
  const auto params = spec.params(M);
  const bool exact = M <= spec.exact_m_ceiling;
  for (int K : spec.k_values()) {
    const auto r = fixed_k_run(params, K, exact, {.use_gamma = spec.config.use_gamma});
    const double q = r.goal_error ? std::abs(*r.goal_error) : std::nan("");
    json note = nullptr;
    if (r.goal_error && q < precision_floor) note = {{"precision_floor", true}};
    res.table.add_row({static_cast<double>(K), q, r.report.eta1, r.report.eta1 / q, r.report.eta2, r.report.eta2 / q},
                      note);
  }
  res.extra["M"] = M;
  return res;
}

inline CommandResult cmd_sweep_k(const RunSpec& spec) { return cmd_table2(spec); }

/// Full estimator internals for each requested K.
inline CommandResult cmd_fixed_k(const RunSpec& spec) {
  CommandResult res;
  res.table.columns = fixed_k_columns();
  const int M = spec.chain_lengths().front();
  const auto params = spec.params(M);
  json reports = json::array();
  for (int K : spec.k_values()) {
    const auto r = fixed_k_run(params, K, M <= spec.exact_m_ceiling, {.use_gamma = spec.config.use_gamma});
    const auto& e = r.report;
    res.table.add_row({static_cast<double>(K), r.goal_error.value_or(std::nan("")), e.first_term, e.sigma_bar,
                       e.theta_plus, e.theta_minus, e.eta_upp_plus, e.eta_upp_minus, e.eta_low_plus, e.eta_low_minus,
                       e.bound_low, e.bound_high, e.eta1, e.eta2});
    json j = to_json(e);
    j["K"] = K;
    j["goal_error"] = r.goal_error ? json(*r.goal_error) : json(nullptr);
    reports.push_back(std::move(j));
  }
  res.extra["M"] = M;
  res.extra["reports"] = reports;
  return res;
}

/**
 * For each tolerance, the smallest K whose true error, eta1 and eta2
 * respectively reach it. K is scanned upward from 0 until every tolerance
 * is resolved or K = M - 2.
 */
inline CommandResult cmd_table3(const RunSpec& spec) {
  CommandResult res;
  res.table.columns = table3_columns();
  const int M = spec.chain_lengths().front();
  if (M > spec.exact_m_ceiling) throw usage_error("table3 needs the exact error; M exceeds the ceiling");
  const auto params = spec.params(M);
  const auto taus = spec.tolerances();
  std::vector<std::array<std::optional<int>, 3>> found(taus.size());
  auto resolved = [&] {
    return std::all_of(found.begin(), found.end(), [](const auto& f) { return f[0] && f[1] && f[2]; });
  };
  for (int K = 0; K <= M - 2 && !resolved(); ++K) {
    const auto r = fixed_k_run(params, K, true, {.use_gamma = spec.config.use_gamma});
    const std::array<double, 3> v{std::abs(*r.goal_error), r.report.eta1, r.report.eta2};
    for (std::size_t t = 0; t < taus.size(); ++t)
      for (int c = 0; c < 3; ++c)
        if (!found[t][c] && v[c] <= taus[t]) found[t][c] = K;
  }
  auto cell = [](const std::optional<int>& k) { return k ? static_cast<double>(*k) : std::nan(""); };
  for (std::size_t t = 0; t < taus.size(); ++t)
    res.table.add_row({taus[t], cell(found[t][0]), cell(found[t][1]), cell(found[t][2])});
  res.extra["M"] = M;
  return res;
}

/// Local eta2 indicators along the chain, one row per atom; eta2_el in row i
/// belongs to bond (i, i+1).
inline CommandResult cmd_profile(const RunSpec& spec) {
  CommandResult res;
  res.table.columns = profile_columns();
  const int M = spec.chain_lengths().front();
  const int K = spec.k_values().front();
  const auto params = spec.params(M);
  const auto r = fixed_k_run(params, K, false, {.use_gamma = spec.config.use_gamma});
  const auto tot = eta2_total(r.report);
  const double nan = std::nan("");
  for (int i = -M + 1; i <= M; ++i) {
    const bool interior = i >= -M + 3 && i <= M - 2;
    const auto k = static_cast<std::size_t>(i + M - 3);
    const auto b = static_cast<std::size_t>(i + M - 1);
    res.table.add_row({static_cast<double>(i), interior ? r.report.eta2_at[k] : nan,
                       i < M ? r.report.eta2_el[b] : nan, interior ? tot[k] : nan});
  }
  res.extra["M"] = M;
  res.extra["K"] = K;
  return res;
}

inline CommandResult run_command(const RunSpec& spec) {
  switch (spec.mode) {
    case Mode::adapt: return cmd_adapt(spec);
    case Mode::fixed_k: return cmd_fixed_k(spec);
    case Mode::sweep_k: return cmd_sweep_k(spec);
    case Mode::table1: return cmd_table1(spec);
    case Mode::table2: return cmd_table2(spec);
    case Mode::table3: return cmd_table3(spec);
    case Mode::profile: return cmd_profile(spec);
  }
  throw internal_consistency_error("unhandled mode");
}

/// Renders a command result in the requested format.
inline std::string render(const RunSpec& spec, const CommandResult& res) {
  if (spec.format == OutputFormat::csv) return to_csv(res.table);
  json j;
  j["spec"] = to_json(spec);
  j["columns"] = json::array();
  for (const auto& c : res.table.columns) j["columns"].push_back(c.name);
  j["rows"] = rows_to_json(res.table);
  for (const auto& [key, value] : res.extra.items()) j[key] = value;
  return j.dump(2) + "\n";
}

}  // namespace qcfk
