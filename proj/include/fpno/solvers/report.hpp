#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fpno {

enum class Outcome { Converged, Diverged, MaxIters, LinearSolveFailed };

std::string to_string(Outcome outcome);

/// One row per recorded residual: entry 0 of every solve (or of every
/// increment in incremental loading) is the initial residual.
struct IterationRecord {
  int iter = 0;
  double res_norm = 0.0;
  double rel_res = 0.0;
  // Line-search step lambda, or trust radius for TR; 0 for initial rows.
  double step = 0.0;
  bool precond_used = false;
};

struct SolveReport {
  Outcome outcome = Outcome::MaxIters;
  int iterations = 0;
  std::vector<IterationRecord> history;
  double wall_time = 0.0;
  // Set when the preconditioner produced non-finite output and was disabled.
  bool model_fallback = false;
  std::string detail;

  std::vector<double> residual_history() const;
  double final_residual() const { return history.empty() ? 0.0 : history.back().res_norm; }
};

/// Columns iter,res_norm,rel_res,step,precond_used; 17 significant digits.
void write_report_csv(std::ostream& os, const SolveReport& report);
void write_report_csv(const std::string& path, const SolveReport& report);

/// Formats a double with 17 significant digits ('.' separator).
std::string format_double(double v);

}  // namespace fpno
