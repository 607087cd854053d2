#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dvs/dual_solver.hpp"
#include "dvs/oracle.hpp"
#include "dvs/problem_model.hpp"
#include "dvs/toy_demo.hpp"

namespace dvs::io {

inline constexpr std::string_view kVersion = "dvs 1.0.0";

/// Problem schema:
///   {"n": int, "m": int, "Q": [[n x n]], "c": [n], "A": [[m x n]], "b": [m],
///    "U": [[...], ...]}
/// Unknown keys are rejected. Errors name the JSON path, e.g. "$.A[1]".
DiscreteQP parse_problem(std::string_view bytes);
std::string problem_to_json(const DiscreteQP& p);

std::string lifted_to_json(const BinaryQP& q);

struct ReportOptions {
  bool include_trace = false;
  bool include_timing = true;
};

/// Solve report with a fixed key order. Reals use 17 significant digits.
std::string emit_report(const SolveReport& r, const SolverConfig& cfg,
                        const ReportOptions& opts = {});

struct ParsedReport {
  SolveReport report;
  SolverConfig config;
  ReportOptions options;
};

/// Inverse of emit_report; emit_report(parse_report(s)) reproduces s.
ParsedReport parse_report(std::string_view bytes);

std::string emit_oracle_report(const OracleResult& r, double seconds,
                               const ReportOptions& opts = {});

std::string emit_toy_report(const ToyInstance& t, const std::vector<double>& roots,
                            const ToySolution& s);

struct CheckResult {
  std::vector<std::string> passed;
  std::vector<std::string> failed;

  bool ok() const { return failed.empty(); }
  /// One "PASS name" or "FAIL name: reason" line per check.
  std::string summary() const;
};

/// Re-verifies a solve or oracle report against its problem: membership and
/// feasibility of x, the objective within 1e-9 (1 + |P|), and for solve
/// reports the claimed certificate status.
CheckResult check(const DiscreteQP& p, std::string_view report_bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace dvs::io
