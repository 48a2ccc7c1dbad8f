#pragma once

// Fixed-step predictor-corrector integrators for fractional initial-value
// problems  D^alpha x(t) = g(t, x(t)),  x(0) = x0,  0 < alpha <= 1,
// under the Caputo and Caputo-Fabrizio (CF) operators, plus a classical RK4
// reference used for the alpha = 1 reduction checks.

#include "fracdyn/order.hpp"
#include "fracdyn/weights.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracdyn {

enum class OperatorKind { Caputo, CF, Classical };

/// Which discretisation of the CF integral equation to use.
///
/// Paper: x_{k+1} = x0 + (alpha/M) * trapezoid history, i.e. the CF
///   operator's integral term alone. This is the alpha-scaled classical ODE.
/// Corrected: restores the non-integral term (1-alpha)/M * [g(x) - g(x0)] of
///   the CF fractional integral. The predictor carries it at the last known
///   state and the corrector resolves it implicitly (Newton) at t_{k+1}.
enum class CfScheme { Paper, Corrected };

inline const char* to_string(OperatorKind op) {
  switch (op) {
    case OperatorKind::Caputo: return "caputo";
    case OperatorKind::CF: return "cf";
    case OperatorKind::Classical: return "classical";
  }
  return "?";
}

inline const char* to_string(CfScheme scheme) {
  return scheme == CfScheme::Paper ? "paper" : "corrected";
}

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct SolverConfig {
  Scalar step{0.01};
  Scalar horizon{1};
  Scalar normalization{1};  // M(alpha)
  CfScheme cf_mode{CfScheme::Corrected};

  void validate() const {
    if (!(step > Scalar(0)) || !std::isfinite(step))
      throw std::invalid_argument("step must be positive");
    if (!(horizon >= step) || !std::isfinite(horizon))
      throw std::invalid_argument("horizon must be finite and at least one step");
    if (!(normalization > Scalar(0)) || !std::isfinite(normalization))
      throw std::invalid_argument("normalization must be positive");
  }

  /// N = floor(horizon / step); the small slack absorbs representation error
  /// in ratios such as 50 / 0.01.
  std::size_t steps() const {
    return static_cast<std::size_t>(std::floor(horizon / step + Scalar(1e-9)));
  }
};

/// Autonomous or time-dependent right-hand side g(t, x). The Jacobian is
/// optional; when absent the CF corrected scheme differentiates numerically.
template <typename Scalar>
struct VectorField {
  std::size_t dimension{};
  std::function<Vector<Scalar>(Scalar, const Vector<Scalar>&)> evaluate;
  std::function<Matrix<Scalar>(Scalar, const Vector<Scalar>&)> jacobian;
};

template <typename Scalar>
struct Trajectory {
  std::vector<Scalar> times;
  Matrix<Scalar> states;  // one row per time point
  OperatorKind op{OperatorKind::Caputo};
  Scalar order{1};

  std::size_t size() const { return times.size(); }
  Vector<Scalar> state(std::size_t k) const {
    return states.row(static_cast<Eigen::Index>(k)).transpose();
  }
  Vector<Scalar> terminal() const { return state(size() - 1); }
};

/// Base for run-time failures of an integration; carries the step index at
/// which the state left the finite / bounded region.
class NumericalDivergence : public std::runtime_error {
 public:
  NumericalDivergence(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Thrown with the partial trajectory (all accepted steps before `step()`).
template <typename Scalar>
class DivergenceError : public NumericalDivergence {
 public:
  DivergenceError(const std::string& what, std::size_t step, Trajectory<Scalar> partial)
      : NumericalDivergence(what, step), partial_(std::move(partial)) {}
  const Trajectory<Scalar>& partial() const { return partial_; }

 private:
  Trajectory<Scalar> partial_;
};

/// States with any |component| above this bound abort the run.
inline constexpr double kDivergenceBound = 1e12;

namespace detail {

template <typename Scalar>
bool out_of_bounds(const Vector<Scalar>& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i)) || std::abs(x(i)) > Scalar(kDivergenceBound)) return true;
  }
  return false;
}

template <typename Scalar>
void check_problem(const VectorField<Scalar>& field, const Vector<Scalar>& initial,
                   const SolverConfig<Scalar>& config) {
  config.validate();
  if (!field.evaluate) throw std::invalid_argument("vector field has no evaluation function");
  if (field.dimension == 0 || static_cast<std::size_t>(initial.size()) != field.dimension)
    throw std::invalid_argument("initial state dimension does not match the vector field");
  if (out_of_bounds(initial)) throw std::invalid_argument("initial state is not finite");
}

/// Run skeleton shared by all integrators: allocates storage, records
/// the initial point, and converts a bound violation into DivergenceError.
template <typename Scalar>
class Run {
 public:
  Run(const Vector<Scalar>& initial, const SolverConfig<Scalar>& config, OperatorKind op,
      Scalar order)
      : steps_(config.steps()), step_(config.step) {
    traj_.op = op;
    traj_.order = order;
    traj_.times.reserve(steps_ + 1);
    traj_.times.push_back(Scalar(0));
    traj_.states.resize(static_cast<Eigen::Index>(steps_ + 1), initial.size());
    traj_.states.row(0) = initial.transpose();
  }

  std::size_t steps() const { return steps_; }
  Scalar time(std::size_t k) const { return static_cast<Scalar>(k) * step_; }

  void accept(std::size_t k, const Vector<Scalar>& x, const char* what) {
    if (out_of_bounds(x)) fail(k, std::string(what) + " left the finite region");
    traj_.states.row(static_cast<Eigen::Index>(k)) = x.transpose();
    traj_.times.push_back(time(k));
  }

  [[noreturn]] void fail(std::size_t k, const std::string& why) {
    traj_.states.conservativeResize(static_cast<Eigen::Index>(k), Eigen::NoChange);
    throw DivergenceError<Scalar>(why + " at step " + std::to_string(k) + " (t = " +
                                      std::to_string(static_cast<double>(time(k))) + ")",
                                  k, std::move(traj_));
  }

  Trajectory<Scalar> finish() { return std::move(traj_); }

 private:
  std::size_t steps_;
  Scalar step_;
  Trajectory<Scalar> traj_;
};

/// Solves a * delta = r. Unknowns whose row of `a` has no off-diagonal
/// entries are divided out first and eliminated from the rest, so a component
/// with zero residual on an invariant axis gets an exactly zero update
/// (pivoting in a full LU would leak rounding into it).
template <typename Scalar>
Vector<Scalar> solve_decoupled_first(const Matrix<Scalar>& a, Vector<Scalar> r) {
  const Eigen::Index d = a.rows();
  std::vector<Eigen::Index> coupled;
  Vector<Scalar> delta = Vector<Scalar>::Zero(d);
  std::vector<bool> direct(static_cast<std::size_t>(d), false);
  for (Eigen::Index i = 0; i < d; ++i) {
    bool alone = a(i, i) != Scalar(0);
    for (Eigen::Index j = 0; j < d && alone; ++j) alone = j == i || a(i, j) == Scalar(0);
    direct[static_cast<std::size_t>(i)] = alone;
    if (alone)
      delta(i) = r(i) / a(i, i);
    else
      coupled.push_back(i);
  }
  if (coupled.empty()) return delta;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!direct[static_cast<std::size_t>(i)] || delta(i) == Scalar(0)) continue;
    for (Eigen::Index j : coupled) r(j) -= a(j, i) * delta(i);
  }
  const Vector<Scalar> sub = a(coupled, coupled).partialPivLu().solve(r(coupled));
  for (std::size_t k = 0; k < coupled.size(); ++k) delta(coupled[k]) = sub(static_cast<Eigen::Index>(k));
  return delta;
}

template <typename Scalar>
Matrix<Scalar> numeric_jacobian(const VectorField<Scalar>& field, Scalar t,
                                const Vector<Scalar>& x) {
  const Eigen::Index d = x.size();
  Matrix<Scalar> jac(d, d);
  const Scalar rel = std::cbrt(std::numeric_limits<Scalar>::epsilon());
  Vector<Scalar> probe = x;
  for (Eigen::Index j = 0; j < d; ++j) {
    const Scalar h = rel * std::max(Scalar(1), std::abs(x(j)));
    probe(j) = x(j) + h;
    const Vector<Scalar> up = field.evaluate(t, probe);
    probe(j) = x(j) - h;
    const Vector<Scalar> down = field.evaluate(t, probe);
    probe(j) = x(j);
    jac.col(j) = (up - down) / (Scalar(2) * h);
  }
  return jac;
}

}  // namespace detail

/// Fractional Adams-Bashforth-Moulton PECE under the Caputo derivative.
template <typename Scalar>
Trajectory<Scalar> integrate_caputo(const VectorField<Scalar>& field, const Vector<Scalar>& initial,
                                    FractionalOrder<Scalar> order,
                                    const SolverConfig<Scalar>& config) {
  detail::check_problem(field, initial, config);
  const Scalar alpha = order.value();
  detail::Run<Scalar> run(initial, config, OperatorKind::Caputo, alpha);
  const std::size_t n = run.steps();
  const Eigen::Index d = initial.size();

  const WeightTable<Scalar> table(alpha, config.step, n);
  const Scalar gamma_inv = Scalar(1) / std::tgamma(alpha);

  Matrix<Scalar> g(static_cast<Eigen::Index>(n + 1), d);
  g.row(0) = field.evaluate(Scalar(0), initial).transpose();
  WeightVector<Scalar> b, w;
  Vector<Scalar> x(d), pred(d);

  for (std::size_t k = 0; k < n; ++k) {
    const auto rows = static_cast<Eigen::Index>(k + 1);
    const auto history = g.topRows(rows).transpose();
    table.predictor(k, w);
    pred.noalias() = history * w;
    pred = initial + gamma_inv * pred;
    if (detail::out_of_bounds(pred)) run.fail(k + 1, "Caputo predictor");

    table.corrector(k, b);
    const Scalar t_next = run.time(k + 1);
    x.noalias() = history * b.head(rows);
    x += b(rows) * field.evaluate(t_next, pred);
    x = initial + gamma_inv * x;

    run.accept(k + 1, x, "Caputo corrector");
    g.row(rows) = field.evaluate(t_next, x).transpose();
  }
  return run.finish();
}

/// Predictor-corrector for the CF operator with n = ceil(alpha) = 1 weights.
template <typename Scalar>
Trajectory<Scalar> integrate_cf(const VectorField<Scalar>& field, const Vector<Scalar>& initial,
                                FractionalOrder<Scalar> order, const SolverConfig<Scalar>& config) {
  detail::check_problem(field, initial, config);
  const Scalar alpha = order.value();
  detail::Run<Scalar> run(initial, config, OperatorKind::CF, alpha);
  const std::size_t n = run.steps();
  const Eigen::Index d = initial.size();

  const WeightTable<Scalar> table(Scalar(1), config.step, n);
  const Scalar integral_scale = alpha / config.normalization;
  const Scalar local_scale = (Scalar(1) - alpha) / config.normalization;
  const bool corrected = config.cf_mode == CfScheme::Corrected && local_scale != Scalar(0);

  Matrix<Scalar> g(static_cast<Eigen::Index>(n + 1), d);
  g.row(0) = field.evaluate(Scalar(0), initial).transpose();
  const Vector<Scalar> g0 = g.row(0).transpose();
  WeightVector<Scalar> b, w;
  Vector<Scalar> x(d), pred(d), base(d);
  const Matrix<Scalar> identity = Matrix<Scalar>::Identity(d, d);

  for (std::size_t k = 0; k < n; ++k) {
    const auto rows = static_cast<Eigen::Index>(k + 1);
    const auto history = g.topRows(rows).transpose();
    table.predictor(k, w);
    pred.noalias() = history * w;
    pred = initial + integral_scale * pred;
    if (corrected) pred += local_scale * (g.row(k).transpose() - g0);
    if (detail::out_of_bounds(pred)) run.fail(k + 1, "CF predictor");

    table.corrector(k, b);
    const Scalar t_next = run.time(k + 1);
    base.noalias() = history * b.head(rows);
    base += b(rows) * field.evaluate(t_next, pred);
    base = initial + integral_scale * base;

    if (!corrected) {
      x = base;
    } else {
      // Solve x = base - c*g0 + c*g(t_{k+1}, x) by Newton from the predictor.
      base -= local_scale * g0;
      x = pred;
      bool converged = false;
      for (int iter = 0; iter < 50 && !converged; ++iter) {
        const Vector<Scalar> residual = x - base - local_scale * field.evaluate(t_next, x);
        const Matrix<Scalar> jac = field.jacobian ? field.jacobian(t_next, x)
                                                  : detail::numeric_jacobian(field, t_next, x);
        const Vector<Scalar> delta =
            detail::solve_decoupled_first<Scalar>(identity - local_scale * jac, residual);
        x -= delta;
        if (detail::out_of_bounds(x)) run.fail(k + 1, "CF implicit solve");
        const Scalar scale = std::max(Scalar(1), x.cwiseAbs().maxCoeff());
        converged = delta.cwiseAbs().maxCoeff() <= Scalar(1e-12) * scale;
      }
      if (!converged) run.fail(k + 1, "CF implicit solve did not converge");
    }

    run.accept(k + 1, x, "CF corrector");
    g.row(rows) = field.evaluate(t_next, x).transpose();
  }
  return run.finish();
}

/// Classical fixed-step RK4; ground truth for the alpha = 1 reductions.
template <typename Scalar>
Trajectory<Scalar> reference_rk4(const VectorField<Scalar>& field, const Vector<Scalar>& initial,
                                 const SolverConfig<Scalar>& config) {
  detail::check_problem(field, initial, config);
  detail::Run<Scalar> run(initial, config, OperatorKind::Classical, Scalar(1));
  const Scalar h = config.step;
  Vector<Scalar> x = initial;
  for (std::size_t k = 0; k < run.steps(); ++k) {
    const Scalar t = run.time(k);
    const Vector<Scalar> k1 = field.evaluate(t, x);
    const Vector<Scalar> k2 = field.evaluate(t + h / 2, x + h / 2 * k1);
    const Vector<Scalar> k3 = field.evaluate(t + h / 2, x + h / 2 * k2);
    const Vector<Scalar> k4 = field.evaluate(t + h, x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    run.accept(k + 1, x, "RK4 state");
  }
  return run.finish();
}

}  // namespace fracdyn
