#include "cli/commands.hpp"

#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "fracdelay/dpml.hpp"
#include "fracdelay/errors.hpp"
#include "fracdelay/word_sum.hpp"

namespace fracdelay::cli {

namespace {

constexpr int kQtableLimit = 12;

/// Runs `body`, turning exceptions into messages on `err` and exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: config: " << e.what() << "\n";
    return exit_invalid_input;
  } catch (const CsvError& e) {
    err << "error: csv: " << e.what() << "\n";
    return exit_invalid_input;
  } catch (const OutputError& e) {
    err << "error: output: " << e.what() << "\n";
    return exit_output_failure;
  } catch (const NumericalError& e) {
    err << "error: numerical: " << e.what() << "\n";
    return exit_numerical_failure;
  } catch (const Error& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return exit_invalid_input;
  }
}

void print_matrix(std::ostream& out, const SquareMatrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out << " ";
    for (Eigen::Index j = 0; j < a.cols(); ++j) out << " " << format_number(a(i, j));
    out << "\n";
  }
}

void warn_norm(const SquareMatrix& m, const SquareMatrix& n, std::ostream& err) {
  const double bound = norm1(m) + norm1(n);
  if (bound >= 1.0) {
    err << "warning: ||M||_1 + ||N||_1 = " << bound << " >= 1, the series may not converge\n";
  }
}

/// Column of values for k = first..last; falls back to fixed partial sums
/// when the adaptive series fails. Returns true on fallback.
bool fill_column(std::vector<double>& col, int first, int last, const std::function<std::vector<double>()>& adaptive,
                 const std::function<double(int)>& partial) {
  try {
    col = adaptive();
    return false;
  } catch (const NumericalError&) {
    col.clear();
    for (int k = first; k <= last; ++k) col.push_back(partial(k));
    return true;
  }
}

std::vector<double> scalars(const std::vector<SquareMatrix>& mats) {
  std::vector<double> out;
  out.reserve(mats.size());
  for (const auto& a : mats) out.push_back(a(0, 0));
  return out;
}

}  // namespace

CsvTable solve_table(const DelaySystem& sys, const std::string& method) {
  SolutionTrace trace;
  if (method == "closed") {
    trace = closed_form_solve(sys);
  } else if (method == "step") {
    trace = step_solve(sys);
  } else if (method == "commutative") {
    trace = commutative_solve(sys);
  } else if (method == "delta") {
    trace = to_nabla_time(delta_solve(sys));
  } else {
    throw InvalidArgument("unknown method '" + method + "' (expected closed, step, commutative or delta)");
  }
  return trace_table(trace.values);
}

CsvTable figure_table(const FigureOptions& opts) {
  if (!(opts.alpha > 0.0 && opts.alpha <= 1.0)) throw InvalidArgument("figure: alpha must lie in (0, 1]");
  if (opts.delay < 1) throw InvalidArgument("figure: delay must be at least 1");
  if (opts.imax < 0) throw InvalidArgument("figure: imax must be non-negative");
  const int r = opts.delay;
  if (opts.kmax < -r) throw InvalidArgument("figure: kmax must be at least -delay");

  const SquareMatrix m = SquareMatrix::Constant(1, 1, opts.m);
  const SquareMatrix n = SquareMatrix::Constant(1, 1, opts.n);
  const SquareMatrix zero = SquareMatrix::Zero(1, 1);
  const int first = -r;
  const int last = opts.kmax;

  const Dpml d(DpmlParams{opts.alpha, opts.beta, r, m, n, {}});
  const Dpml f(DpmlParams{opts.alpha, opts.beta, r, zero, n, {}});
  auto e_value = [&](int k, bool adaptive) {
    if (k < -r) return 0.0;
    if (k == -r) return 1.0;
    return adaptive ? ml_eval(m, opts.alpha, opts.beta - 1.0, k, -r)(0, 0)
                    : ml_partial_sum(m, opts.alpha, opts.beta - 1.0, k, -r, opts.imax)(0, 0);
  };

  std::vector<double> dcol, ecol, fcol;
  bool truncated = false;
  truncated |= fill_column(
      dcol, first, last, [&] { return scalars(d.range(first, last)); },
      [&](int k) { return d.partial_sum(k, opts.imax)(0, 0); });
  truncated |= fill_column(
      ecol, first, last,
      [&] {
        std::vector<double> col;
        for (int k = first; k <= last; ++k) col.push_back(e_value(k, true));
        return col;
      },
      [&](int k) { return e_value(k, false); });
  truncated |= fill_column(
      fcol, first, last, [&] { return scalars(f.range(first, last)); },
      [&](int k) { return f.partial_sum(k, opts.imax)(0, 0); });

  CsvTable t;
  if (truncated) t.comments.push_back("truncated at i=" + std::to_string(opts.imax) + ", convergence not guaranteed");
  t.header = {"k", "D", "E", "F"};
  for (int k = first; k <= last; ++k) {
    const auto i = static_cast<std::size_t>(k - first);
    t.rows.push_back({static_cast<double>(k), dcol[i], ecol[i], fcol[i]});
  }
  return t;
}

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto sys = load_system(opts.config);
    warn_norm(sys.m, sys.n, err);
    const auto text = to_csv(solve_table(sys, opts.method));
    write_file_atomic(opts.out, text);
    out << "wrote " << opts.out << " (k = " << 1 - sys.delay << ".." << sys.horizon << ", method " << opts.method
        << ")\n";
    return static_cast<int>(exit_ok);
  });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(opts.tol > 0.0)) throw InvalidArgument("verify: tol must be positive");
    const auto sys = load_system(opts.config);
    warn_norm(sys.m, sys.n, err);
    const auto rep = verify(sys, opts.tol);
    if (!rep.oracle_available) throw SingularityError(rep.failure);
    if (rep.oracle.condition) out << "cond(I - M):     " << format_number(*rep.oracle.condition) << "\n";
    if (!rep.closed_form) {
      out << "closed form:     unavailable\n";
      out << "result:          FAIL\n";
      err << "error: numerical: " << rep.failure << "\n";
      return static_cast<int>(exit_numerical_failure);
    }
    out << "max deviation:   " << format_number(rep.max_deviation) << " at k=" << rep.worst_deviation_k << "\n";
    out << "worst residual:  " << format_number(rep.max_residual) << " at k=" << rep.worst_residual_k << "\n";
    out << "tolerance:       " << format_number(rep.tol) << "\n";
    out << "result:          " << (rep.pass ? "PASS" : "FAIL") << "\n";
    return static_cast<int>(rep.pass ? exit_ok : exit_verify_failed);
  });
}

int cmd_qtable(const QtableOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.imax < 0 || opts.imax > kQtableLimit) {
      throw InvalidArgument("qtable: imax must lie in [0, " + std::to_string(kQtableLimit) + "]");
    }
    const auto m = load_matrix(opts.m);
    const auto n = load_matrix(opts.n);
    if (m.rows() != n.rows()) {
      throw InvalidArgument("qtable: M is " + std::to_string(m.rows()) + "x" + std::to_string(m.rows()) +
                            " but N is " + std::to_string(n.rows()) + "x" + std::to_string(n.rows()));
    }
    const WordSumTable table(m, n);
    for (int i = 1; i <= opts.imax; ++i) {
      for (int j = 0; j <= i - 1; ++j) {
        out << "Q(" << i << "," << j << ") =\n";
        print_matrix(out, word_sum(table, i, j));
      }
    }
    return static_cast<int>(exit_ok);
  });
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DpmlParams params{opts.alpha, opts.beta, opts.delay, load_matrix(opts.m), load_matrix(opts.n), {}};
    params.validate();
    warn_norm(params.m, params.n, err);
    const int last = std::max(opts.k, opts.kmax);
    const auto values = Dpml(params).range(opts.k, last);
    for (int k = opts.k; k <= last; ++k) {
      out << "D(" << k << ") =\n";
      print_matrix(out, values[static_cast<std::size_t>(k - opts.k)]);
    }
    return static_cast<int>(exit_ok);
  });
}

int cmd_figure(const FigureOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto table = figure_table(opts);
    write_file_atomic(opts.out, to_csv(table));
    for (const auto& c : table.comments) err << "note: " << c << "\n";
    out << "wrote " << opts.out << " (k = " << -opts.delay << ".." << opts.kmax << ")\n";
    return static_cast<int>(exit_ok);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete fractional delay systems: closed-form solutions and checks", "fracdelay"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Solve a system and write its trace as CSV");
  s->add_option("--config", solve.config, "System JSON file")->required();
  s->add_option("--method", solve.method, "closed | step | commutative | delta")
      ->check(CLI::IsMember({"closed", "step", "commutative", "delta"}));
  s->add_option("--out", solve.out, "Output CSV")->required();

  VerifyOptions ver;
  auto* v = app.add_subcommand("verify", "Compare the closed form against the stepping oracle");
  v->add_option("--config", ver.config, "System JSON file")->required();
  v->add_option("--tol", ver.tol, "Pass threshold for scaled deviation and residual");

  QtableOptions q;
  auto* qt = app.add_subcommand("qtable", "Print the word sums Q(i, j)");
  qt->add_option("--m", q.m, "Matrix JSON file")->required();
  qt->add_option("--n", q.n, "Matrix JSON file")->required();
  qt->add_option("--imax", q.imax, "Largest i (at most 12)")->required();

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Print D(k) for a range of k");
  e->add_option("--alpha", ev.alpha)->required();
  e->add_option("--beta", ev.beta)->required();
  e->add_option("--delay", ev.delay)->required();
  e->add_option("--m", ev.m, "Matrix JSON file")->required();
  e->add_option("--n", ev.n, "Matrix JSON file")->required();
  e->add_option("--k", ev.k)->required();
  e->add_option("--kmax", ev.kmax, "Last k (default: --k)");

  FigureOptions fig;
  auto* f = app.add_subcommand("figure", "Write D, E and F for scalar M, N as CSV");
  f->add_option("--alpha", fig.alpha)->required();
  f->add_option("--beta", fig.beta)->required();
  f->add_option("--m", fig.m)->required();
  f->add_option("--n", fig.n)->required();
  f->add_option("--delay", fig.delay)->required();
  f->add_option("--kmax", fig.kmax)->required();
  f->add_option("--imax", fig.imax, "Partial-sum index when the series diverges")->required();
  f->add_option("--out", fig.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? static_cast<int>(exit_ok) : static_cast<int>(exit_invalid_input);
  }

  if (*s) return cmd_solve(solve, out, err);
  if (*v) return cmd_verify(ver, out, err);
  if (*qt) return cmd_qtable(q, out, err);
  if (*e) {
    if (e->count("--kmax") == 0) ev.kmax = ev.k;
    return cmd_eval(ev, out, err);
  }
  return cmd_figure(fig, out, err);
}

}  // namespace fracdelay::cli
