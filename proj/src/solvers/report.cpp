#include "fpno/solvers/report.hpp"

#include <fstream>

#include <fmt/format.h>

#include "fpno/errors.hpp"

namespace fpno {

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Converged: return "CONVERGED";
    case Outcome::Diverged: return "DIVERGED";
    case Outcome::MaxIters: return "MAX_ITERS";
    case Outcome::LinearSolveFailed: return "LINEAR_SOLVE_FAILED";
  }
  return "UNKNOWN";
}

std::vector<double> SolveReport::residual_history() const {
  std::vector<double> out;
  out.reserve(history.size());
  for (const auto& h : history) out.push_back(h.res_norm);
  return out;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_report_csv(std::ostream& os, const SolveReport& report) {
  os << "iter,res_norm,rel_res,step,precond_used\n";
  for (const auto& h : report.history) {
    os << h.iter << ',' << format_double(h.res_norm) << ',' << format_double(h.rel_res) << ','
       << format_double(h.step) << ',' << (h.precond_used ? 1 : 0) << '\n';
  }
}

void write_report_csv(const std::string& path, const SolveReport& report) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_report_csv(os, report);
}

}  // namespace fpno
