#include "fracdelay/solver.hpp"

#include <algorithm>
#include <complex>
#include <sstream>

#include "fracdelay/errors.hpp"

namespace fracdelay {

Forcing Forcing::constant(Vector value) {
  Forcing f;
  f.kind_ = Kind::constant;
  f.constant_ = std::move(value);
  return f;
}

Forcing Forcing::table(GridSeries values) {
  if (!values.empty() && values.first() != 1) throw InvalidArgument("forcing table must start at k = 1");
  Forcing f;
  f.kind_ = Kind::table;
  f.table_ = std::move(values);
  return f;
}

Vector Forcing::at(int k, int dimension) const {
  switch (kind_) {
    case Kind::zero: return Vector::Zero(dimension);
    case Kind::constant: return constant_;
    case Kind::table: return table_.at(k);
  }
  return Vector::Zero(dimension);
}

void DelaySystem::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("system: alpha must lie in (0, 1)");
  if (delay < 1) throw InvalidArgument("system: delay must be at least 1");
  if (m.rows() == 0 || m.rows() != m.cols() || n.rows() != n.cols() || m.rows() != n.rows()) {
    throw InvalidArgument("system: M and N must be square matrices of the same dimension");
  }
  if (horizon < 1) throw InvalidArgument("system: horizon must be at least 1");
  if (phi.empty() || phi.first() != 1 - delay || phi.last() != 0) {
    throw InvalidArgument("system: phi must cover exactly [1 - r, 0]");
  }
  if (phi.dimension() != dimension()) throw InvalidArgument("system: phi dimension differs from M");
  switch (forcing.kind()) {
    case Forcing::Kind::zero: break;
    case Forcing::Kind::constant:
      if (forcing.constant_value().size() != dimension()) {
        throw InvalidArgument("system: forcing dimension differs from M");
      }
      break;
    case Forcing::Kind::table: {
      const auto& t = forcing.table_values();
      if (t.empty() || t.first() != 1 || t.last() < horizon) {
        throw InvalidArgument("system: forcing table must cover [1, horizon]");
      }
      if (t.dimension() != dimension()) throw InvalidArgument("system: forcing dimension differs from M");
      break;
    }
  }
  policy.validate();
}

DelaySystem DelaySystem::with_phi(GridSeries p) const {
  DelaySystem out = *this;
  out.phi = std::move(p);
  return out;
}

DelaySystem DelaySystem::with_forcing(Forcing f) const {
  DelaySystem out = *this;
  out.forcing = std::move(f);
  return out;
}

DpmlParams DelaySystem::dpml_params() const { return DpmlParams{alpha, alpha, delay, m, n, policy}; }

namespace {

SingularityError singular_error(const SquareMatrix& m) {
  Eigen::EigenSolver<SquareMatrix> es(m, false);
  std::complex<double> closest = es.eigenvalues()(0);
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i) - 1.0) < std::abs(closest - 1.0)) closest = es.eigenvalues()(i);
  }
  std::ostringstream os;
  os << "I - M is singular: M has eigenvalue " << closest.real();
  if (closest.imag() != 0.0) os << (closest.imag() > 0 ? "+" : "") << closest.imag() << "i";
  return SingularityError(os.str());
}

/// H_{-alpha-1}(k, s-1) as a function of k - s + 1.
std::vector<double> difference_weights(double alpha, int span) { return monomial_weights(-alpha - 1.0, span + 1); }

}  // namespace

SolutionTrace step_solve(const DelaySystem& sys) {
  sys.validate();
  const int n = sys.dimension();
  const int r = sys.delay;
  const int horizon = sys.horizon;
  const SquareMatrix lhs = SquareMatrix::Identity(n, n) - sys.m;
  Eigen::FullPivLU<SquareMatrix> lu(lhs);
  if (!lu.isInvertible()) throw singular_error(sys.m);

  const auto w = difference_weights(sys.alpha, horizon + r);
  GridSeries z(1 - r, n);
  for (int k = 1 - r; k <= 0; ++k) z.push_back(sys.phi.at(k));
  for (int k = 1; k <= horizon; ++k) {
    Vector rhs = sys.n * z.at(k - r) + sys.forcing.at(k, n);
    for (int s = 1 - r; s < k; ++s) rhs.noalias() -= w[static_cast<std::size_t>(k - s + 1)] * z.at(s);
    z.push_back(lu.solve(rhs));
  }
  SolutionTrace out;
  out.values = std::move(z);
  out.residuals = defining_residuals(sys, out.values);
  out.condition = norm1(lhs) * norm1(lu.inverse());
  return out;
}

std::vector<double> defining_residuals(const DelaySystem& sys, const GridSeries& z) {
  const int r = sys.delay;
  const int n = sys.dimension();
  if (!z.contains(1 - r) || !z.contains(sys.horizon)) {
    throw RangeError("defining_residuals: trace must cover [1 - r, K]");
  }
  const auto w = difference_weights(sys.alpha, sys.horizon + r);
  std::vector<double> res;
  res.reserve(static_cast<std::size_t>(sys.horizon));
  for (int k = 1; k <= sys.horizon; ++k) {
    Vector lhs = Vector::Zero(n);
    for (int s = 1 - r; s <= k; ++s) lhs.noalias() += w[static_cast<std::size_t>(k - s + 1)] * z.at(s);
    const Vector diff = lhs - sys.m * z.at(k) - sys.n * z.at(k - r) - sys.forcing.at(k, n);
    res.push_back(diff.cwiseAbs().maxCoeff());
  }
  return res;
}

namespace {

/// Closed-form building blocks sharing one table of D values on [1-r, K].
class ClosedForm {
 public:
  ClosedForm(const DelaySystem& sys, WordForm form, int last)
      : sys_(sys), r_(sys.delay), d_(Dpml(sys.dpml_params(), form).range(1 - sys.delay, std::max(last, 0))) {
    for (int s = 1 - r_; s <= 0; ++s) {
      initial_.push_back(rl_difference(sys.alpha, -r_, sys.phi, s) - sys.m * sys.phi.at(s));
    }
  }

  const SquareMatrix& d(int k) const {
    if (k < 1 - r_ || k - (1 - r_) >= static_cast<int>(d_.size())) {
      throw RangeError("closed form: D(" + std::to_string(k) + ") outside the tabulated range");
    }
    return d_[static_cast<std::size_t>(k - (1 - r_))];
  }

  /// nabla^alpha phi(s) - M phi(s), s in [1-r, 0].
  const Vector& initial(int s) const { return initial_[static_cast<std::size_t>(s - (1 - r_))]; }

  Vector homogeneous(int k) const {
    Vector acc = Vector::Zero(sys_.dimension());
    for (int s = 1 - r_; s <= std::min(k, 0); ++s) acc.noalias() += d(k - r_ - (s - 1)) * initial(s);
    return acc;
  }

  Vector forced(int k) const {
    Vector acc = Vector::Zero(sys_.dimension());
    for (int s = 1; s <= k; ++s) acc.noalias() += d(k - r_ - (s - 1)) * sys_.forcing.at(s, sys_.dimension());
    return acc;
  }

  Vector delta(int k) const {
    Vector acc = Vector::Zero(sys_.dimension());
    for (int s = -r_; s <= std::min(k - 2, -1); ++s) acc.noalias() += d(k - 1 - r_ - s) * initial(s + 1);
    for (int s = 0; s <= k - 2; ++s) acc.noalias() += d(k - 1 - r_ - s) * sys_.forcing.at(s + 1, sys_.dimension());
    return acc;
  }

 private:
  const DelaySystem& sys_;
  int r_;
  std::vector<SquareMatrix> d_;
  std::vector<Vector> initial_;
};

void check_point(const DelaySystem& sys, int k) {
  if (k < 1 - sys.delay) throw InvalidArgument("closed form: requires k >= 1 - r");
  if (k > sys.horizon && sys.forcing.kind() == Forcing::Kind::table && !sys.forcing.table_values().contains(k)) {
    throw RangeError("closed form: forcing table does not cover k");
  }
}

SolutionTrace solve_with(const DelaySystem& sys, WordForm form) {
  sys.validate();
  const ClosedForm cf(sys, form, sys.horizon);
  SolutionTrace out;
  out.values = GridSeries::tabulate(1 - sys.delay, sys.horizon, sys.dimension(),
                                    [&](int k) -> Vector { return cf.homogeneous(k) + cf.forced(k); });
  out.residuals = defining_residuals(sys, out.values);
  return out;
}

}  // namespace

Vector homogeneous_part(const DelaySystem& sys, int k) {
  sys.validate();
  check_point(sys, k);
  return ClosedForm(sys, WordForm::recursive, k).homogeneous(k);
}

Vector forced_part(const DelaySystem& sys, int k) {
  sys.validate();
  check_point(sys, k);
  if (k <= 0) return Vector::Zero(sys.dimension());
  return ClosedForm(sys, WordForm::recursive, k).forced(k);
}

SolutionTrace closed_form_solve(const DelaySystem& sys) { return solve_with(sys, WordForm::recursive); }

SolutionTrace commutative_solve(const DelaySystem& sys) {
  sys.validate();
  if (!commutes(sys.m, sys.n)) throw CommutativityError("commutative_solve: M and N do not commute");
  return solve_with(sys, WordForm::binomial);
}

SolutionTrace delta_solve(const DelaySystem& sys) {
  sys.validate();
  const ClosedForm cf(sys, WordForm::recursive, sys.horizon);
  SolutionTrace out;
  out.values = GridSeries::tabulate(2 - sys.delay, sys.horizon + 1, sys.dimension(),
                                    [&](int k) -> Vector { return cf.delta(k); });
  return out;
}

SolutionTrace to_nabla_time(const SolutionTrace& delta_trace) {
  SolutionTrace out = delta_trace;
  out.values = GridSeries(delta_trace.values.first() - 1, delta_trace.values.values());
  return out;
}

VerifyReport verify(const DelaySystem& sys, double tol) {
  VerifyReport rep;
  rep.tol = tol;
  try {
    rep.oracle = step_solve(sys);
    rep.oracle_available = true;
  } catch (const Error& e) {
    rep.failure = std::string("stepping oracle unavailable: ") + e.what();
    return rep;
  }
  try {
    rep.closed_form = closed_form_solve(sys);
  } catch (const NumericalError& e) {
    rep.diverged = dynamic_cast<const DivergenceError*>(&e) != nullptr;
    rep.failure = std::string("closed form unavailable: ") + e.what();
    return rep;
  }
  const auto& zs = rep.oracle.values;
  const auto& zc = rep.closed_form->values;
  for (int k = zs.first(); k <= zs.last(); ++k) {
    const double ref = zs.at(k).cwiseAbs().maxCoeff();
    const double dev = (zc.at(k) - zs.at(k)).cwiseAbs().maxCoeff() / (1.0 + ref);
    if (dev > rep.max_deviation || k == zs.first()) {
      rep.max_deviation = dev;
      rep.worst_deviation_k = k;
    }
  }
  double history = 0.0;
  for (int k = zc.first(); k <= 0; ++k) history = std::max(history, zc.at(k).cwiseAbs().maxCoeff());
  for (int k = 1; k <= sys.horizon; ++k) {
    history = std::max(history, zc.at(k).cwiseAbs().maxCoeff());
    const Vector f = sys.forcing.at(k, sys.dimension());
    const double scale = 1.0 + history + (f.size() ? f.cwiseAbs().maxCoeff() : 0.0);
    const double res = rep.closed_form->residuals[static_cast<std::size_t>(k - 1)] / scale;
    if (res > rep.max_residual || k == 1) {
      rep.max_residual = res;
      rep.worst_residual_k = k;
    }
  }
  rep.pass = rep.max_deviation <= tol && rep.max_residual <= tol;
  return rep;
}

}  // namespace fracdelay
