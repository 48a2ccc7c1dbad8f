#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracdyn/integrators.hpp"
#include "fracdyn/linear_cf.hpp"
#include "fracdyn/lotka.hpp"
#include "fracdyn/examples.hpp"
#include "oracles/weights.hpp"

#include <cmath>
#include <random>

using namespace fracdyn;
using Vec = Vector<double>;

namespace {

VectorField<double> linear_field(double lambda) {
  return {1, [lambda](double, const Vec& x) { return Vec(lambda * x); },
          [lambda](double, const Vec&) { return Matrix<double>::Constant(1, 1, lambda); }};
}

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

SolverConfig<double> grid(double step, double horizon, CfScheme mode = CfScheme::Corrected) {
  SolverConfig<double> c;
  c.step = step;
  c.horizon = horizon;
  c.cf_mode = mode;
  return c;
}

double max_abs_diff(const Matrix<double>& a, const Matrix<double>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("fractional order range") {
  CHECK_THROWS_AS(FractionalOrder<double>(0.0), std::invalid_argument);
  CHECK_THROWS_AS(FractionalOrder<double>(1.0000001), std::invalid_argument);
  CHECK_THROWS_AS(FractionalOrder<double>(std::nan("")), std::invalid_argument);
  CHECK(FractionalOrder<double>(1.0).is_classical());
  CHECK_FALSE(FractionalOrder<double>(0.5).is_classical());
}

TEST_CASE("corrector weights: trapezoid cases") {
  const auto w = corrector_weights<double>(1, 1.0, 0.1);
  REQUIRE(w.size() == 3);
  CHECK(w(0) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(w(1) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(w(2) == doctest::Approx(0.05).epsilon(1e-14));

  const auto w0 = corrector_weights<double>(0, 1.0, 1.0);
  REQUIRE(w0.size() == 2);
  CHECK(w0(0) == 0.5);
  CHECK(w0(1) == 0.5);

  const auto wk = corrector_weights<double>(40, 1.0, 0.25);
  for (Eigen::Index i = 1; i <= 40; ++i) CHECK(wk(i) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("predictor weights: rectangle rule and fractional case") {
  const auto d = predictor_weights<double>(2, 1.0, 0.5);
  REQUIRE(d.size() == 3);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(d(i) == 0.5);

  const auto d17 = predictor_weights<double>(17, 1.0, 0.3);
  CHECK(d17.sum() == doctest::Approx(18 * 0.3).epsilon(1e-13));

  // (h^n / n) [(k-i+1)^n - (k-i)^n] with k = 1, n = 1/2, h = 1.
  const auto f = predictor_weights<double>(1, 0.5, 1.0);
  REQUIRE(f.size() == 2);
  CHECK(f(0) == doctest::Approx(2 * (std::sqrt(2.0) - 1)).epsilon(1e-14));
  CHECK(f(1) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("weights reject bad arguments") {
  CHECK_THROWS_AS(corrector_weights<double>(3, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(corrector_weights<double>(3, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(predictor_weights<double>(3, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(predictor_weights<double>(3, 0.5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(WeightTable<double>(0.5, std::nan(""), 4), std::invalid_argument);
}

TEST_CASE("weights agree with the long-double case formulas and stay positive") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> order(1e-3, 1.0);
  std::uniform_real_distribution<double> step(1e-3, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double n = trial == 0 ? 1.0 : order(rng);
    const double h = step(rng);
    const int k = trial % 60;
    const auto b = corrector_weights<double>(k, n, h);
    const auto d = predictor_weights<double>(k, n, h);
    // The middle weights are second differences of m^{n+1}; rounding is
    // relative to the size of the terms being differenced, not the result.
    const double pre = std::pow(h, n) / (n * (n + 1));
    for (int i = 0; i <= k + 1; ++i) {
      const double ref = static_cast<double>(oracle::corrector_weight(k, i, n, h));
      const double terms = pre * std::pow(double(k - i + 2), n + 1);
      CHECK(b(i) > 0);
      CHECK(std::abs(b(i) - ref) <= 1e-14 * terms + 1e-14 * std::abs(ref));
    }
    for (int i = 0; i <= k; ++i) {
      const double ref = static_cast<double>(oracle::predictor_weight(k, i, n, h));
      CHECK(d(i) > 0);
      CHECK(std::abs(d(i) - ref) <= 1e-12 * std::abs(ref));
    }
  }
}

TEST_CASE("weight table matches the free functions") {
  for (double n : {0.3, 0.6, 1.0}) {
    const WeightTable<double> table(n, 0.05, 120);
    CHECK(table.max_steps() == 120);
    WeightVector<double> b, d;
    for (std::size_t k : {0u, 1u, 2u, 57u, 119u}) {
      table.corrector(k, b);
      table.predictor(k, d);
      CHECK(max_abs_diff(b, corrector_weights<double>(k, n, 0.05)) <= 1e-15);
      CHECK(max_abs_diff(d, predictor_weights<double>(k, n, 0.05)) <= 1e-15);
    }
  }
}

TEST_CASE("solver config validation and step count") {
  auto c = grid(0.01, 50);
  CHECK(c.steps() == 5000);
  CHECK(grid(0.1, 0.3).steps() == 3);
  CHECK(grid(0.3, 1.0).steps() == 3);
  CHECK_THROWS_AS(grid(0.0, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(grid(0.1, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(grid(0.1, 0.05).validate(), std::invalid_argument);
  c.normalization = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("integrators reject mismatched problems") {
  const auto field = linear_field(-1);
  const FractionalOrder<double> a(0.5);
  CHECK_THROWS_AS(integrate_cf(field, vec({1, 2}), a, grid(0.1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_caputo(field, vec({INFINITY}), a, grid(0.1, 1)),
                  std::invalid_argument);
  VectorField<double> empty;
  empty.dimension = 1;
  CHECK_THROWS_AS(reference_rk4(empty, vec({1}), grid(0.1, 1)), std::invalid_argument);
}

TEST_CASE("trajectory grid") {
  const auto traj = integrate_caputo(linear_field(-1), vec({1}), FractionalOrder<double>(0.7),
                                     grid(0.125, 2));
  REQUIRE(traj.size() == 17);
  CHECK(traj.states.rows() == 17);
  CHECK(traj.op == OperatorKind::Caputo);
  CHECK(traj.order == 0.7);
  for (std::size_t k = 0; k < traj.size(); ++k) CHECK(traj.times[k] == 0.125 * double(k));
  CHECK(traj.state(0)(0) == 1.0);
}

TEST_CASE("classical references on x' = -x") {
  const auto rk = reference_rk4(linear_field(-1), vec({1}), grid(0.01, 1));
  CHECK(std::abs(rk.terminal()(0) - std::exp(-1.0)) <= 1e-8);

  const auto cap = integrate_caputo(linear_field(-1), vec({1}), FractionalOrder<double>(1.0),
                                    grid(0.01, 1));
  CHECK(std::abs(cap.terminal()(0) - 0.3679) <= 1e-3);

  VectorField<double> zero{2, [](double, const Vec& x) { return Vec(Vec::Zero(x.size())); }, {}};
  const auto still = reference_rk4(zero, vec({3, -4}), grid(0.1, 2));
  for (std::size_t k = 0; k < still.size(); ++k) CHECK(still.state(k) == vec({3, -4}));
}

TEST_CASE("alpha = 1: CF (both modes) and Caputo are the same trapezoidal PECE") {
  const auto p = example1().params;
  const auto field = lotka_field(p);
  const Vec x0 = example1().initial;
  const FractionalOrder<double> one(1.0);
  const auto cap = integrate_caputo(field, x0, one, grid(0.01, 5));
  const auto cfp = integrate_cf(field, x0, one, grid(0.01, 5, CfScheme::Paper));
  const auto cfc = integrate_cf(field, x0, one, grid(0.01, 5, CfScheme::Corrected));
  CHECK(max_abs_diff(cap.states, cfp.states) <= 1e-12);
  CHECK(max_abs_diff(cfp.states, cfc.states) <= 1e-12);

}

TEST_CASE("alpha = 1 PECE converges to the RK4 reference at second order") {
  // Example 1 has a fast transient (z peaks near 11 before t = 5), so the
  // trapezoidal error constant is large; check the rate, then agreement on
  // a fine grid.
  const auto s = example1();
  const auto field = lotka_field(s.params);
  const Vec x0 = s.initial;
  const FractionalOrder<double> one(1.0);
  double previous = 0;
  for (double h : {0.01, 0.005, 0.0025}) {
    const auto rk = reference_rk4(field, x0, grid(h, 5));
    const double err_cap = max_abs_diff(rk.states, integrate_caputo(field, x0, one, grid(h, 5)).states);
    const double err_cf = max_abs_diff(rk.states, integrate_cf(field, x0, one, grid(h, 5)).states);
    CHECK(err_cap == err_cf);
    if (previous > 0) CHECK(previous / err_cap == doctest::Approx(4).epsilon(0.1));
    previous = err_cap;
  }
  const auto rk = reference_rk4(field, x0, grid(5e-4, 5));
  CHECK(max_abs_diff(rk.states, integrate_caputo(field, x0, one, grid(5e-4, 5)).states) <= 1e-3);
}

TEST_CASE("linear CF exact solution") {
  const FractionalOrder<double> one(1.0), half(0.5);
  using C = std::complex<double>;
  CHECK(std::abs(linear_cf_exact(C(-1), one, C(1), 1.0) - std::exp(-1.0)) <= 1e-15);
  CHECK(std::abs(linear_cf_exact(C(-1), half, C(1), 3.0) - std::exp(-1.0)) <= 1e-15);
  CHECK_THROWS_AS(linear_cf_exact(C(2), half, C(1), 1.0), std::domain_error);

  // On the circle |lambda - c| = c the modulus of the solution is constant.
  for (double alpha : {0.2, 0.5, 0.9}) {
    const FractionalOrder<double> a(alpha);
    const double c = 1 / (2 * (1 - alpha));
    for (double theta : {0.3, 1.2, 2.5, 4.0}) {
      const C lambda = C(c) + c * std::polar(1.0, theta);
      for (double t : {0.5, 3.0, 10.0})
        CHECK(std::abs(linear_cf_exact(lambda, a, C(2), t)) == doctest::Approx(2).epsilon(1e-9));
    }
  }
}

TEST_CASE("linear CF exact solution solves the equivalent ODE") {
  // (1 - (1-alpha) lambda) x' = alpha lambda x, integrated independently.
  const double lambda = -1.7, alpha = 0.35;
  const double rate = alpha * lambda / (1 - (1 - alpha) * lambda);
  const auto rk = reference_rk4(linear_field(rate), vec({1}), grid(1e-3, 4));
  const auto exact = linear_cf_exact(std::complex<double>(lambda), FractionalOrder<double>(alpha),
                                     std::complex<double>(1), 4.0);
  CHECK(std::abs(rk.terminal()(0) - exact.real()) <= 1e-12);
}

TEST_CASE("CF corrected scheme converges to the linear oracle") {
  const FractionalOrder<double> a(0.5);
  const auto field = linear_field(-1);
  const double horizon = 3;
  const double exact =
      linear_cf_exact(std::complex<double>(-1), a, std::complex<double>(1), horizon).real();
  CHECK(exact == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  double previous = 0;
  for (double h : {0.04, 0.02, 0.01}) {
    const double err =
        std::abs(integrate_cf(field, vec({1}), a, grid(h, horizon)).terminal()(0) - exact);
    if (previous > 0) CHECK(previous / err >= 1.5);
    previous = err;
  }
  CHECK(previous <= 1e-4);
}

TEST_CASE("CF corrected scheme without an analytic Jacobian") {
  const FractionalOrder<double> a(0.5);
  auto field = linear_field(-1);
  field.jacobian = nullptr;
  const auto with = integrate_cf(linear_field(-1), vec({1}), a, grid(0.01, 3));
  const auto without = integrate_cf(field, vec({1}), a, grid(0.01, 3));
  CHECK(max_abs_diff(with.states, without.states) <= 1e-12);
}

TEST_CASE("Caputo scheme converges on the relaxation problem") {
  // D^alpha x = -x has x(t) = E_alpha(-t^alpha); the error should shrink
  // steadily with h (the order of the fractional ABM is 1 + alpha here).
  const FractionalOrder<double> a(0.8);
  const auto ref = integrate_caputo(linear_field(-1), vec({1}), a, grid(0.00125, 2)).terminal()(0);
  double previous = 0;
  for (double h : {0.04, 0.02, 0.01}) {
    const double err =
        std::abs(integrate_caputo(linear_field(-1), vec({1}), a, grid(h, 2)).terminal()(0) - ref);
    if (previous > 0) CHECK(previous / err >= 1.5);
    previous = err;
  }
}

TEST_CASE("determinism") {
  const auto s = example2();
  const Vec x0 = s.initial;
  const auto field = lotka_field(s.params);
  const FractionalOrder<double> a(0.6);
  for (int i = 0; i < 2; ++i) {
    const auto cf1 = integrate_cf(field, x0, a, grid(0.01, 5));
    const auto cf2 = integrate_cf(field, x0, a, grid(0.01, 5));
    CHECK((cf1.states.array() == cf2.states.array()).all());
    const auto c1 = integrate_caputo(field, x0, a, grid(0.01, 5));
    const auto c2 = integrate_caputo(field, x0, a, grid(0.01, 5));
    CHECK((c1.states.array() == c2.states.array()).all());
  }
}

TEST_CASE("components starting at exactly zero stay exactly zero") {
  const auto p = example1().params;
  const auto field = lotka_field(p);
  const FractionalOrder<double> a(0.6);
  for (int axis : {0, 1, 2}) {
    Vec x0 = vec({1.6, 1.9, 0.7});
    x0(axis) = 0.0;
    for (auto mode : {CfScheme::Paper, CfScheme::Corrected}) {
      const auto cf = integrate_cf(field, x0, a, grid(0.01, 10, mode));
      CHECK((cf.states.col(axis).array() == 0.0).all());
    }
    const auto cap = integrate_caputo(field, x0, a, grid(0.01, 10));
    CHECK((cap.states.col(axis).array() == 0.0).all());
  }
}

TEST_CASE("divergence is reported with the step index and partial trajectory") {
  // x' = x^2 blows up at t = 1.
  VectorField<double> blowup{1, [](double, const Vec& x) { return Vec(x.cwiseProduct(x)); },
                             [](double, const Vec& x) { return Matrix<double>(2 * x.asDiagonal()); }};
  for (int which = 0; which < 3; ++which) {
    try {
      const auto cfg = grid(0.01, 5);
      if (which == 0) (void)integrate_caputo(blowup, vec({1}), FractionalOrder<double>(0.9), cfg);
      if (which == 1) (void)integrate_cf(blowup, vec({1}), FractionalOrder<double>(1.0), cfg);
      if (which == 2) (void)reference_rk4(blowup, vec({1}), cfg);
      FAIL("expected divergence");
    } catch (const DivergenceError<double>& e) {
      CAPTURE(which);
      CHECK(e.step() > 0);
      CHECK(e.step() < 500);
      CHECK(e.partial().size() == e.step());
      CHECK(e.partial().states.rows() == static_cast<Eigen::Index>(e.step()));
      CHECK(e.partial().states.cwiseAbs().maxCoeff() <= kDivergenceBound);
      CHECK(std::string(e.what()).find("step " + std::to_string(e.step())) != std::string::npos);
    }
  }
}
