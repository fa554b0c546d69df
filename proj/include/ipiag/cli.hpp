#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipiag/core.hpp"
#include "ipiag/rates.hpp"
#include "ipiag/solver.hpp"

namespace ipiag {

/// Exit status of the ipiag tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_config = 2,
  exit_divergence = 3,
  exit_bound_check = 4,
};

enum class ScheduleKind { sync, uniform1 };

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& name);

/// Unset alpha / eta1 / eta2 mean "auto".
struct RunConfig {
  Variant variant = Variant::ipiag;
  std::optional<double> alpha;
  std::optional<double> eta1;
  std::optional<double> eta2;
  /// eta1 = c1 alpha beta when eta1 is auto.
  double c1 = 0.45;
  /// Step-size rule for alpha = auto.
  CertificateVariant alpha_rule = CertificateVariant::theorem1_stated;
  int tau = 4;
  int workers = 4;
  ScheduleKind schedule = ScheduleKind::uniform1;
  std::uint64_t seed = 0;
  Index iters = 10000;
  Index record_every = 1;
  std::optional<double> stop_tolerance;

  void validate() const;
};

RunConfig run_config_from_json(const nlohmann::json& j, const RunConfig& defaults = {});
nlohmann::json to_json(const RunConfig& config);

struct ResolvedParams {
  SolverParams params;
  /// Present whenever beta is known and eta1 / (alpha beta) < 1/2.
  std::optional<RateCertificate> certificate;
  std::vector<std::string> notes;
};

/// Fills in the "auto" parameters. Auto needs beta; alpha auto uses
/// config.alpha_rule with C1 = c1 for the variants that use eta1 and C1 = 0
/// otherwise; eta2 auto is the certificate's eta2_max (0 for piag / piag-m).
/// Throws InputError on variants whose fixed inertia is contradicted.
ResolvedParams resolve_parameters(const CompositeProblem& problem, const RunConfig& config);

struct RunResult {
  RunConfig config;
  ResolvedParams resolved;
  Trace trace;
  std::optional<BoundReport> bound;
  /// Max staleness of the schedule that was replayed.
  int observed_staleness = 0;
};

/// Builds the schedule and runs. The problem must carry a reference point
/// (known optimum) for dist2 and the bound check.
RunResult execute_run(const CompositeProblem& problem, const RunConfig& config,
                      const TraceOptions& options = {});

/// First recorded k with dist2 <= threshold.
std::optional<Index> iterations_to(const Trace& trace, double threshold);

/// { variant, alpha, eta1, eta2, ..., final_phi_gap, final_dist2, iters_to_1e-6,
///   certificate, bound_check, wall_clock_seconds }.
nlohmann::json run_summary(const RunResult& result, double wall_clock_seconds);

/// Log-scale dist2 vs k with the 2 alpha/(1 - eta1) rho^k C envelope when a
/// bound report is available.
void write_svg_plot(std::ostream& out, const RunResult& result);

/// Float print precision for CSV output: IPIAG_PRINT_PRECISION if set to an
/// integer in [1, 17], else 17.
int print_precision();

struct CompareRow {
  std::string label;
  Variant variant = Variant::ipiag;
  double alpha = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double rho = std::numeric_limits<double>::quiet_NaN();
  /// Means over repetitions; empty if some repetition never got there.
  std::optional<double> iters_to_1e4;
  std::optional<double> iters_to_1e6;
  double final_gap = 0.0;
  double final_dist2 = 0.0;
  int repetitions = 0;
};

/// Runs every config `repetitions` times (seeds seed, seed + 1, ... when the
/// schedule is random) on one problem and averages.
std::vector<CompareRow> compare_runs(const CompositeProblem& problem,
                                     const std::vector<std::pair<std::string, RunConfig>>& configs,
                                     int repetitions);
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows, int precision);

/// Problem with a reference point: the known optimum, or a computed Lasso
/// reference solution when the generator has none.
CompositeProblem with_reference(const CompositeProblem& problem);

int cli_main(int argc, char** argv);

}  // namespace ipiag
