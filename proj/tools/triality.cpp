#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// Single-header bundle first, standard system install second.
#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "triality/triality.hpp"

namespace {

using namespace triality;

// Exit codes held stable for scripting: 0 success, 1 verification
// failure (an identity or consistency check did not hold), 2 usage or
// input error.
constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0' || text[0] == '-') {
    throw validation_error(what + " must be an unsigned integer, got '" + text + "'");
  }
  return value;
}

// Default seed: TRIALITY_SEED from the environment, else 42.  An explicit
// --seed always wins; a malformed environment value is an input error
// rather than a silent fallback.
std::uint64_t default_seed() {
  const char* env = std::getenv("TRIALITY_SEED");
  if (!env || !*env) return 42;
  return parse_uint(env, "TRIALITY_SEED");
}

// Writes to standard output, or atomically (temp file + rename) to the
// given path so readers never observe a half-written file.
void write_output(const std::optional<std::string>& out_path, const std::string& text) {
  if (!out_path) {
    std::cout << text;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(*out_path);
  fs::path tmp(target);
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw validation_error("cannot open '" + tmp.string() + "' for writing");
    file << text;
    file.flush();
    if (!file) throw validation_error("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw validation_error("cannot move output into '" + target.string() + "': " + ec.message());
  }
}

// A scenario argument is first matched against the canonical library,
// then treated as a file path.
Scenario load_scenario(const std::string& ref) {
  if (const Scenario* canonical = find_canonical(ref)) return *canonical;
  std::ifstream file(ref, std::ios::binary);
  if (!file) {
    std::string names;
    for (const auto& sc : canonical_scenarios()) {
      if (!names.empty()) names += ", ";
      names += sc.name;
    }
    throw validation_error("'" + ref + "' is neither a canonical scenario (" + names +
                           ") nor a readable file");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_scenario(buffer.str());
}

std::vector<std::pair<std::string, std::string>> provenance_base() {
  return {{"tool", kToolName}, {"version", kVersion}};
}

int cmd_scenarios(const std::string& dump_name, const std::optional<std::string>& out_path) {
  if (!dump_name.empty()) {
    const Scenario* scenario = find_canonical(dump_name);
    if (!scenario) {
      throw validation_error("no canonical scenario named '" + dump_name + "'");
    }
    write_output(out_path, serialize_scenario(*scenario));
    return kExitOk;
  }
  std::string text;
  for (const auto& scenario : canonical_scenarios()) {
    text += scenario.name + "\n    " + scenario.metadata + "\n";
  }
  write_output(out_path, text);
  return kExitOk;
}

int cmd_report(const std::string& scenario_ref, const std::optional<std::string>& out_path) {
  const Scenario scenario = load_scenario(scenario_ref);
  const MeasureReport report = full_report(scenario.state);
  const IdentityResiduals residuals = residuals_from_report(report);

  ResultTable table;
  table.provenance = provenance_base();
  table.provenance.emplace_back("scenario", scenario.name);
  table.headers = {"n", "P", "PQ", "C_bare", "C", "DQ", "D", "EQ", "E", "Ec", "PF"};
  std::vector<double> row = {static_cast<double>(report.n),
                             report.p,
                             report.p_q,
                             report.c_bare,
                             report.c,
                             report.d_q,
                             report.d,
                             report.e_q,
                             report.e,
                             report.e_c,
                             report.p_f};
  const auto residual_values = residuals.values();
  for (int i = 0; i < IdentityResiduals::kCount; ++i) {
    table.headers.push_back(std::string("residual[") + IdentityResiduals::names()[i] + "]");
    row.push_back(residual_values[i]);
  }
  table.rows.push_back(std::move(row));
  write_output(out_path, emit_table(table));
  return kExitOk;
}

int report_batch_outcome(const BatchVerdict& verdict) {
  if (verdict.pass()) return kExitOk;
  constexpr std::size_t kMaxListed = 20;
  for (std::size_t i = 0; i < verdict.failures.size() && i < kMaxListed; ++i) {
    const BatchFailure& f = verdict.failures[i];
    std::cerr << "FAIL n=" << f.n << " m=" << f.m << " seed=" << f.seed << " identity=["
              << f.identity << "] residual=" << format_double(f.residual) << "\n";
  }
  if (verdict.failures.size() > kMaxListed) {
    std::cerr << "... and " << (verdict.failures.size() - kMaxListed) << " more failures\n";
  }
  return kExitVerificationFailure;
}

int cmd_verify_scenario(const std::string& scenario_ref, double tolerance,
                        const std::optional<std::string>& out_path) {
  const Scenario scenario = load_scenario(scenario_ref);
  const IdentityResiduals residuals = check_identities(scenario.state);

  ResultTable table;
  table.provenance = provenance_base();
  table.provenance.emplace_back("scenario", scenario.name);
  table.provenance.emplace_back("tolerance", format_double(tolerance));
  for (const char* name : IdentityResiduals::names()) table.headers.emplace_back(name);
  const auto values = residuals.values();
  table.rows.emplace_back(values.begin(), values.end());
  write_output(out_path, emit_table(table));

  bool ok = true;
  for (int i = 0; i < IdentityResiduals::kCount; ++i) {
    if (values[i] > tolerance) {
      std::cerr << "FAIL scenario=" << scenario.name << " identity=["
                << IdentityResiduals::names()[i] << "] residual=" << format_double(values[i])
                << "\n";
      ok = false;
    }
  }
  return ok ? kExitOk : kExitVerificationFailure;
}

int cmd_verify_random(const std::vector<std::string>& random_args, double tolerance,
                      bool seed_given, std::uint64_t seed_option,
                      const std::optional<std::string>& out_path) {
  const int n = static_cast<int>(parse_uint(random_args[0], "--random path count"));
  const int m = static_cast<int>(parse_uint(random_args[1], "--random detector dimension"));
  const long long count = static_cast<long long>(parse_uint(random_args[2], "--random count"));
  std::uint64_t seed = parse_uint(random_args[3], "--random seed");
  if (seed_given) seed = seed_option;

  const BatchVerdict verdict = run_batch({n, n}, {m, m}, count, seed, tolerance);

  ResultTable table;
  table.provenance = provenance_base();
  table.provenance.emplace_back("n", std::to_string(n));
  table.provenance.emplace_back("m", std::to_string(m));
  table.provenance.emplace_back("count", std::to_string(count));
  table.provenance.emplace_back("seed", std::to_string(seed));
  table.provenance.emplace_back("tolerance", format_double(tolerance));
  table.provenance.emplace_back("max_eq_form_gap", format_double(verdict.max_eq_form_gap));
  table.provenance.emplace_back("max_ic_value_gap", format_double(verdict.max_ic_value_gap));
  table.provenance.emplace_back("max_ic_squared_gap", format_double(verdict.max_ic_squared_gap));
  for (const char* name : IdentityResiduals::names()) table.headers.emplace_back(name);
  table.rows.emplace_back(verdict.max_residual.begin(), verdict.max_residual.end());
  write_output(out_path, emit_table(table));

  return report_batch_outcome(verdict);
}

int cmd_sweep(const std::string& scenario_ref, int steps,
              const std::optional<std::string>& out_path) {
  if (steps < 2) throw validation_error("sweep: --steps must be >= 2");
  const Scenario scenario = load_scenario(scenario_ref);
  const auto rows = transition_sweep(scenario.state.amplitudes(), steps);

  ResultTable table;
  table.provenance = provenance_base();
  table.provenance.emplace_back("scenario", scenario.name);
  table.provenance.emplace_back("steps", std::to_string(steps));
  table.headers = {"t", "PQ", "C", "DQ", "EQ", "P", "D", "E", "PF"};
  for (const auto& [t, r] : rows) {
    table.rows.push_back({t, r.p_q, r.c, r.d_q, r.e_q, r.p, r.d, r.e, r.p_f});
  }
  write_output(out_path, emit_table(table));
  return kExitOk;
}

ResultTable fringe_block_table(const std::string& section, double weight, const FringeScan& scan) {
  ResultTable table;
  table.provenance.emplace_back("section", section);
  table.provenance.emplace_back("weight", format_double(weight));
  table.provenance.emplace_back("i_max_grid", format_double(scan.i_max));
  table.provenance.emplace_back("i_min_grid", format_double(scan.i_min));
  table.provenance.emplace_back("visibility_grid", format_double(scan.visibility));
  table.provenance.emplace_back("i_max_analytic", format_double(scan.i_max_analytic));
  table.provenance.emplace_back("i_min_analytic", format_double(scan.i_min_analytic));
  table.provenance.emplace_back("visibility_analytic", format_double(scan.visibility_analytic));
  table.headers = {"phase", "intensity"};
  for (const auto& [phase, intensity] : scan.samples) {
    table.rows.push_back({phase, intensity});
  }
  return table;
}

int cmd_fringe(const std::string& scenario_ref, int grid,
               const std::optional<std::string>& out_path) {
  if (grid < 8) throw validation_error("fringe: --grid must be >= 8");
  const Scenario scenario = load_scenario(scenario_ref);
  const DensityMatrix rho_r = reduced_density(scenario.state);
  const int n = rho_r.n();
  const double algebraic = coherence(rho_r);

  std::string text;
  std::string header_prefix;
  for (const auto& [key, value] : provenance_base()) {
    header_prefix += "# " + key + "=" + value + "\n";
  }
  text += header_prefix;
  text += "# scenario=" + scenario.name + "\n";
  text += "# grid=" + std::to_string(grid) + "\n";

  if (n == 2) {
    const FringeScan scan = fringe_scan_two_path(rho_r, grid);
    ResultTable block = fringe_block_table("scan", 1.0, scan);
    block.provenance.erase(block.provenance.begin());  // section label is noise for n=2
    text += emit_table(block);

    ResultTable summary;
    summary.provenance.emplace_back("section", "summary");
    summary.headers = {"i_max",          "i_min",          "visibility",
                       "i_max_analytic", "i_min_analytic", "visibility_analytic",
                       "coherence_algebraic"};
    summary.rows.push_back({scan.i_max, scan.i_min, scan.visibility, scan.i_max_analytic,
                            scan.i_min_analytic, scan.visibility_analytic, algebraic});
    text += emit_table(summary);
  } else {
    // Multipath: one block per path pair, scanned with the other paths
    // blocked, plus the assembled operational coherence.
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const auto sub = pair_subblock(rho_r, j, k);
        const std::string section = "pair_" + std::to_string(j) + "_" + std::to_string(k);
        if (!sub) {
          text += "# section=" + section + "\n# weight=0 (pair carries no population)\n";
          continue;
        }
        text += emit_table(
            fringe_block_table(section, sub->second, fringe_scan_two_path(sub->first, grid)));
      }
    }
    ResultTable summary;
    summary.provenance.emplace_back("section", "summary");
    summary.headers = {"coherence_algebraic", "coherence_from_scans_grid",
                       "coherence_from_scans_analytic"};
    summary.rows.push_back({algebraic, coherence_from_pairwise_scans(rho_r, grid),
                            coherence_from_pairwise_scans(rho_r)});
    text += emit_table(summary);
  }
  write_output(out_path, text);
  return kExitOk;
}

int cmd_random_suite(int n_min, int n_max, int m_min, int m_max, long long count,
                     long long mixed_count, std::uint64_t seed, double tolerance, int threads,
                     const std::optional<std::string>& out_path) {
  const BatchVerdict verdict = run_batch({n_min, n_max}, {m_min, m_max}, count, seed, tolerance,
                                         threads);
  if (mixed_count <= 0) mixed_count = count;
  const MixedVerdict mixed = run_mixed_batch({n_min, n_max}, mixed_count, seed);

  std::string text;
  ResultTable identity_table;
  identity_table.provenance = provenance_base();
  identity_table.provenance.emplace_back("section", "identity-batch");
  identity_table.provenance.emplace_back(
      "n", std::to_string(n_min) + ".." + std::to_string(n_max));
  identity_table.provenance.emplace_back(
      "m", std::to_string(m_min) + ".." + std::to_string(m_max));
  identity_table.provenance.emplace_back("count_per_cell", std::to_string(count));
  identity_table.provenance.emplace_back("states", std::to_string(verdict.count));
  identity_table.provenance.emplace_back("seed", std::to_string(seed));
  identity_table.provenance.emplace_back("tolerance", format_double(tolerance));
  identity_table.provenance.emplace_back("max_eq_form_gap",
                                         format_double(verdict.max_eq_form_gap));
  identity_table.provenance.emplace_back("max_ic_value_gap",
                                         format_double(verdict.max_ic_value_gap));
  identity_table.provenance.emplace_back("max_ic_squared_gap",
                                         format_double(verdict.max_ic_squared_gap));
  for (const char* name : IdentityResiduals::names()) identity_table.headers.emplace_back(name);
  identity_table.rows.emplace_back(verdict.max_residual.begin(), verdict.max_residual.end());
  text += emit_table(identity_table);

  ResultTable mixed_table;
  mixed_table.provenance.emplace_back("section", "mixed-batch");
  mixed_table.provenance.emplace_back("mixed_states", std::to_string(mixed.mixed_count));
  mixed_table.provenance.emplace_back("pure_states", std::to_string(mixed.pure_count));
  mixed_table.headers = {"max_mixed_excess", "max_pure_residual"};
  mixed_table.rows.push_back({mixed.max_mixed_excess, mixed.max_pure_residual});
  text += emit_table(mixed_table);
  write_output(out_path, text);

  int code = report_batch_outcome(verdict);
  if (mixed.max_mixed_excess > tolerance) {
    std::cerr << "FAIL mixed-state inequality: max excess "
              << format_double(mixed.max_mixed_excess) << " > tolerance "
              << format_double(tolerance) << "\n";
    code = kExitVerificationFailure;
  }
  if (mixed.max_pure_residual > tolerance) {
    std::cerr << "FAIL pure-state equality: max residual "
              << format_double(mixed.max_pure_residual) << " > tolerance "
              << format_double(tolerance) << "\n";
    code = kExitVerificationFailure;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-path wave-particle duality and triality toolkit"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);

  // scenarios
  auto* scenarios_cmd = app.add_subcommand("scenarios", "List canonical scenarios");
  std::string dump_name;
  std::optional<std::string> scenarios_out;
  scenarios_cmd->add_option("--dump", dump_name, "print the named scenario as a document");
  scenarios_cmd->add_option("--out", scenarios_out, "write output to this file atomically");

  // report
  auto* report_cmd = app.add_subcommand("report", "All measures of one scenario");
  std::string report_scenario;
  std::optional<std::string> report_out;
  report_cmd->add_option("scenario", report_scenario, "canonical scenario name or document path")
      ->required();
  report_cmd->add_option("--out", report_out, "write output to this file atomically");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "Check every budget relation on a scenario or random batch");
  std::string verify_scenario;
  std::vector<std::string> random_args;
  double verify_tolerance = 1e-10;
  std::uint64_t verify_seed = 0;
  std::optional<std::string> verify_out;
  auto* verify_scenario_opt = verify_cmd->add_option("scenario", verify_scenario,
                                                     "canonical scenario name or document path");
  auto* verify_random_opt =
      verify_cmd
          ->add_option("--random", random_args,
                       "sample random states in one cell: N_PATHS DETECTOR_DIM COUNT SEED")
          ->expected(4);
  verify_scenario_opt->excludes(verify_random_opt);
  verify_random_opt->excludes(verify_scenario_opt);
  verify_cmd->add_option("--tolerance", verify_tolerance, "pass threshold for every residual")
      ->capture_default_str();
  auto* verify_seed_opt = verify_cmd->add_option(
      "--seed", verify_seed, "random seed (overrides the seed given to --random)");
  verify_cmd->add_option("--out", verify_out, "write output to this file atomically");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Measures along the uniform-overlap detector family G(t), t in [0,1]");
  std::string sweep_scenario;
  int sweep_steps = 101;
  std::optional<std::string> sweep_out;
  sweep_cmd
      ->add_option("scenario", sweep_scenario,
                   "scenario supplying the path amplitudes (detector is replaced by G(t))")
      ->required();
  sweep_cmd->add_option("--steps", sweep_steps, "number of t values")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "write output to this file atomically");

  // fringe
  auto* fringe_cmd =
      app.add_subcommand("fringe", "Phase scan of the recombined output (pairwise when n > 2)");
  std::string fringe_scenario;
  int fringe_grid = 1024;
  std::optional<std::string> fringe_out;
  fringe_cmd->add_option("scenario", fringe_scenario, "canonical scenario name or document path")
      ->required();
  fringe_cmd->add_option("--grid", fringe_grid, "phase samples per scan")->capture_default_str();
  fringe_cmd->add_option("--out", fringe_out, "write output to this file atomically");

  // random-suite
  auto* suite_cmd = app.add_subcommand(
      "random-suite", "Randomized identity batch plus the mixed-state inequality sweep");
  int suite_n_min = 2, suite_n_max = 6, suite_m_min = 1, suite_m_max = 6;
  long long suite_count = 1000, suite_mixed_count = 0;
  std::uint64_t suite_seed = 0;
  double suite_tolerance = 1e-10;
  int suite_threads = 0;
  std::optional<std::string> suite_out;
  suite_cmd->add_option("--n-min", suite_n_min, "smallest path count")->capture_default_str();
  suite_cmd->add_option("--n-max", suite_n_max, "largest path count")->capture_default_str();
  suite_cmd->add_option("--m-min", suite_m_min, "smallest detector dimension")
      ->capture_default_str();
  suite_cmd->add_option("--m-max", suite_m_max, "largest detector dimension")
      ->capture_default_str();
  suite_cmd->add_option("--count", suite_count, "random states per (n, m) cell")
      ->capture_default_str();
  suite_cmd->add_option("--mixed-count", suite_mixed_count,
                        "mixed densities per n (0 = same as --count)");
  auto* suite_seed_opt =
      suite_cmd->add_option("--seed", suite_seed, "random seed (default: TRIALITY_SEED or 42)");
  suite_cmd->add_option("--tolerance", suite_tolerance, "pass threshold for every residual")
      ->capture_default_str();
  suite_cmd->add_option("--threads", suite_threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  suite_cmd->add_option("--out", suite_out, "write output to this file atomically");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(scenarios_cmd)) {
      return cmd_scenarios(dump_name, scenarios_out);
    }
    if (app.got_subcommand(report_cmd)) {
      return cmd_report(report_scenario, report_out);
    }
    if (app.got_subcommand(verify_cmd)) {
      if (verify_tolerance < 0.0) throw validation_error("verify: tolerance must be >= 0");
      if (!random_args.empty()) {
        return cmd_verify_random(random_args, verify_tolerance, verify_seed_opt->count() > 0,
                                 verify_seed, verify_out);
      }
      if (verify_scenario.empty()) {
        throw validation_error("verify: give a scenario or --random N_PATHS DIM COUNT SEED");
      }
      return cmd_verify_scenario(verify_scenario, verify_tolerance, verify_out);
    }
    if (app.got_subcommand(sweep_cmd)) {
      return cmd_sweep(sweep_scenario, sweep_steps, sweep_out);
    }
    if (app.got_subcommand(fringe_cmd)) {
      return cmd_fringe(fringe_scenario, fringe_grid, fringe_out);
    }
    if (app.got_subcommand(suite_cmd)) {
      if (suite_tolerance < 0.0) throw validation_error("random-suite: tolerance must be >= 0");
      const std::uint64_t seed = suite_seed_opt->count() > 0 ? suite_seed : default_seed();
      return cmd_random_suite(suite_n_min, suite_n_max, suite_m_min, suite_m_max, suite_count,
                              suite_mixed_count, seed, suite_tolerance, suite_threads, suite_out);
    }
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const consistency_error& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
  return kExitUsage;
}
