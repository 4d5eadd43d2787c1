#pragma once

#include <iosfwd>
#include <string>

#include "cli/csv.hpp"
#include "fracdelay/solver.hpp"

namespace fracdelay::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_verify_failed = 1,
  exit_invalid_input = 2,
  exit_numerical_failure = 3,
  exit_output_failure = 4,
};

struct SolveOptions {
  std::string config;
  std::string method = "closed";  ///< closed | step | commutative | delta
  std::string out;
};

struct VerifyOptions {
  std::string config;
  double tol = 1e-8;
};

struct QtableOptions {
  std::string m;
  std::string n;
  int imax = 4;
};

struct EvalOptions {
  double alpha = 0.5;
  double beta = 0.5;
  int delay = 2;
  std::string m;
  std::string n;
  int k = 0;
  int kmax = 0;  ///< values for k..max(k, kmax)
};

struct FigureOptions {
  double alpha = 0.9;
  double beta = 0.6;
  double m = 5.0;
  double n = 3.0;
  int delay = 2;
  int kmax = 20;
  int imax = 60;
  std::string out;
};

/// Trace of `sys` on [1-r, K] by the named method, as a CSV table.
CsvTable solve_table(const DelaySystem& sys, const std::string& method);

/// k, D, E, F for k = -r..kmax; a truncation comment is added when any
/// column had to fall back to the fixed partial sum.
CsvTable figure_table(const FigureOptions& opts);

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_qtable(const QtableOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_figure(const FigureOptions& opts, std::ostream& out, std::ostream& err);

/// Full command line, argv[0] included.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracdelay::cli
