#pragma once

// Stability of linearised fractional systems under the Caputo and CF
// operators.
//
// Caputo: stable iff |arg(lambda)| > alpha*pi/2 for every eigenvalue; the
//   unstable set is a cone around the positive real axis.
// CF: the unstable set is the closed disk |lambda - c| <= c with
//   c = 1/(2(1-alpha)). A sufficient test checks, per eigenvalue, any of
//     (1) |lambda| >= 1/(1-alpha) and lambda != 1/(1-alpha)
//     (2) Re lambda > 1/(1-alpha)
//     (3) Re lambda < 0
//     (4) |Im lambda| > 1/(2(1-alpha))
//
// Boundaries (cone edges, the circle) count as unstable.

#include "fracdyn/lotka.hpp"
#include "fracdyn/order.hpp"
#include "fracdyn/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracdyn {

enum class Criterion { Caputo, CfTheorem, CfDisk };

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::Caputo: return "caputo";
    case Criterion::CfTheorem: return "cf-theorem";
    case Criterion::CfDisk: return "cf-disk";
  }
  return "?";
}

template <typename Scalar>
struct EigenvalueCheck {
  std::complex<Scalar> value;
  std::optional<int> condition;  // representative satisfied condition, if any
  std::vector<int> satisfied;    // every satisfied condition id
};

template <typename Scalar>
struct StabilityVerdict {
  Criterion criterion{};
  bool stable{};
  std::vector<EigenvalueCheck<Scalar>> per_eigenvalue;
};

/// Four-way partition of the plane for a given alpha.
///   A: both stable, B: Caputo only, C: neither, D: CF only.
enum class RegionClass { A, B, C, D };

inline const char* to_string(RegionClass r) {
  static constexpr const char* names[] = {"A", "B", "C", "D"};
  return names[static_cast<int>(r)];
}

namespace detail {

template <typename Scalar>
Scalar cf_threshold(FractionalOrder<Scalar> order) {
  if (order.is_classical())
    throw std::domain_error("CF stability criteria are undefined at alpha = 1");
  return Scalar(1) / (Scalar(1) - order.value());
}

template <typename Scalar>
StabilityVerdict<Scalar> assemble(Criterion criterion, std::vector<EigenvalueCheck<Scalar>> checks) {
  StabilityVerdict<Scalar> v{criterion, true, std::move(checks)};
  for (const auto& c : v.per_eigenvalue) v.stable = v.stable && c.condition.has_value();
  return v;
}

}  // namespace detail

/// Single-eigenvalue cone test. At alpha = 1 this is the classical Re < 0.
template <typename Scalar>
bool caputo_stable_eigenvalue(std::complex<Scalar> lambda, FractionalOrder<Scalar> order) {
  if (order.is_classical()) return lambda.real() < Scalar(0);
  if (lambda == std::complex<Scalar>(0)) return false;
  return std::abs(std::arg(lambda)) > order.value() * (std::numbers::pi_v<Scalar> / Scalar(2));
}

template <typename Scalar>
StabilityVerdict<Scalar> caputo_stable(const Spectrum<Scalar>& spectrum,
                                       FractionalOrder<Scalar> order) {
  std::vector<EigenvalueCheck<Scalar>> checks;
  for (const auto& lambda : spectrum) {
    EigenvalueCheck<Scalar> c{lambda, std::nullopt, {}};
    if (caputo_stable_eigenvalue(lambda, order)) {
      c.condition = 1;
      c.satisfied = {1};
    }
    checks.push_back(std::move(c));
  }
  return detail::assemble(Criterion::Caputo, std::move(checks));
}

/// Ids of the four sufficient CF conditions that `lambda` satisfies.
template <typename Scalar>
std::vector<int> cf_conditions(std::complex<Scalar> lambda, FractionalOrder<Scalar> order) {
  const Scalar r = detail::cf_threshold(order);
  std::vector<int> ids;
  if (std::abs(lambda) >= r && lambda != std::complex<Scalar>(r)) ids.push_back(1);
  if (lambda.real() > r) ids.push_back(2);
  if (lambda.real() < Scalar(0)) ids.push_back(3);
  if (std::abs(lambda.imag()) > r / Scalar(2)) ids.push_back(4);
  return ids;
}

template <typename Scalar>
StabilityVerdict<Scalar> cf_stable_theorem(const Spectrum<Scalar>& spectrum,
                                           FractionalOrder<Scalar> order) {
  // Representative id preference: imaginary part, left half-plane, modulus,
  // real part.
  static constexpr std::array<int, 4> preference = {4, 3, 1, 2};
  std::vector<EigenvalueCheck<Scalar>> checks;
  for (const auto& lambda : spectrum) {
    EigenvalueCheck<Scalar> c{lambda, std::nullopt, cf_conditions(lambda, order)};
    for (int id : preference) {
      if (std::find(c.satisfied.begin(), c.satisfied.end(), id) != c.satisfied.end()) {
        c.condition = id;
        break;
      }
    }
    checks.push_back(std::move(c));
  }
  return detail::assemble(Criterion::CfTheorem, std::move(checks));
}

/// Outside the closed disk |lambda - c| <= c, c = 1/(2(1-alpha)). Evaluated as
/// |lambda|^2 (1 - alpha) > Re(lambda), the same inequality without the
/// cancellation of |lambda - c| near the origin.
template <typename Scalar>
bool cf_stable_disk(std::complex<Scalar> lambda, FractionalOrder<Scalar> order) {
  detail::cf_threshold(order);
  return std::norm(lambda) * (Scalar(1) - order.value()) > lambda.real();
}

template <typename Scalar>
StabilityVerdict<Scalar> cf_stable_disk(const Spectrum<Scalar>& spectrum,
                                        FractionalOrder<Scalar> order) {
  std::vector<EigenvalueCheck<Scalar>> checks;
  for (const auto& lambda : spectrum) {
    EigenvalueCheck<Scalar> c{lambda, std::nullopt, {}};
    if (cf_stable_disk(lambda, order)) {
      c.condition = 1;
      c.satisfied = {1};
    }
    checks.push_back(std::move(c));
  }
  return detail::assemble(Criterion::CfDisk, std::move(checks));
}

template <typename Scalar>
RegionClass classify_region(std::complex<Scalar> lambda, FractionalOrder<Scalar> order) {
  const bool cf = cf_stable_disk(lambda, order);
  const bool caputo = caputo_stable_eigenvalue(lambda, order);
  if (caputo) return cf ? RegionClass::A : RegionClass::B;
  return cf ? RegionClass::D : RegionClass::C;
}

/// Closed-form stability conditions for one equilibrium, listed as named
/// atoms followed by the combined "caputo" and "cf" rows.
template <typename Scalar>
std::vector<Condition> table1_conditions(const ModelParams<Scalar>& p, FractionalOrder<Scalar> order,
                                         EquilibriumKind kind) {
  p.validate();
  using std::sqrt;
  const Scalar one(1), two(2);
  const Scalar alpha = order.value();
  // 1/(1-alpha) and alpha/(1-alpha) are +inf at alpha = 1: every CF threshold
  // atom is then false.
  const Scalar thr = one / (one - alpha);
  const Scalar thr_minus_one = alpha / (one - alpha);

  std::vector<Condition> out;
  auto add = [&out](std::string name, bool value) {
    out.push_back({std::move(name), value});
    return value;
  };
  // Both roots of (B +- sqrt(B^2 + 4*a*E)) / (2a) above the threshold; a
  // complex pair never satisfies the real inequality.
  auto pair_above = [&](Scalar b, Scalar a, Scalar e) {
    const Scalar disc = b * b + Scalar(4) * a * e;
    if (disc < Scalar(0)) return false;
    return (b - sqrt(disc)) / (two * a) > thr && (b + sqrt(disc)) / (two * a) > thr;
  };

  switch (kind) {
    case EquilibriumKind::E0: {
      add("caputo: always a saddle", false);
      const bool cf = add("a1 > 1/(1-alpha)", p.a1 > thr);
      add("caputo", false);
      add("cf", cf);
      break;
    }
    case EquilibriumKind::E1: {
      const bool c1 = add("a1*a4 < a2*a3 - a2", p.a1 * p.a4 < p.a2 * p.a3 - p.a2);
      const bool c2 = add("a1*a6 < a2*a5 - a2", p.a1 * p.a6 < p.a2 * p.a5 - p.a2);
      const bool f1 = add("(a1*a4 - a2*a3)/a2 > alpha/(1-alpha)",
                          (p.a1 * p.a4 - p.a2 * p.a3) / p.a2 > thr_minus_one);
      const bool f2 = add("(a1*a6 - a2*a5)/a2 > alpha/(1-alpha)",
                          (p.a1 * p.a6 - p.a2 * p.a5) / p.a2 > thr_minus_one);
      add("caputo", c1 && c2);
      add("cf", (c1 && c2) || (f1 && f2));
      break;
    }
    case EquilibriumKind::E2: {
      const Scalar ratio = p.a1 / p.a2;
      const bool chain = add("(a5-1)/a6 < a1/a2 < (a3-1)/a4",
                             (p.a5 - one) / p.a6 < ratio && ratio < (p.a3 - one) / p.a4);
      const bool l1 = add("1 - a3 - (a4/a6)(1-a5) > 1/(1-alpha)",
                          one - p.a3 - p.a4 / p.a6 * (one - p.a5) > thr);
      const bool l23 =
          add("lambda_{2,3} of E2 > 1/(1-alpha)",
              pair_above(p.a2 * (one - p.a5), p.a6,
                         (one - p.a5) * (p.a1 * p.a6 + p.a2 * (one - p.a5))));
      add("caputo", chain);
      add("cf", chain || (l1 && l23));
      break;
    }
    case EquilibriumKind::E3: {
      const Scalar ratio = p.a1 / p.a2;
      const bool chain = add("(a3-1)/a4 < a1/a2 < (a5-1)/a6",
                             (p.a3 - one) / p.a4 < ratio && ratio < (p.a5 - one) / p.a6);
      const Scalar w = one - p.a5 - p.a6 / p.a4 * (one - p.a3) +
                       p.a7 / p.a4 * (p.a1 * p.a4 + p.a2 * (one - p.a3));
      const bool l1 = add("w = 1 - a5 - (a6/a4)(1-a3) + (a7/a4)[a1*a4 + a2(1-a3)] > 1/(1-alpha)",
                          w > thr);
      const bool l23 =
          add("lambda_{2,3} of E3 > 1/(1-alpha)",
              pair_above(p.a2 * (one - p.a3), p.a4,
                         (one - p.a3) * (p.a1 * p.a4 + p.a2 * (one - p.a3))));
      add("caputo", chain);
      add("cf", chain || (l1 && l23));
      break;
    }
    case EquilibriumKind::E4: {
      const Scalar w = p.a4 * (one + p.a1 * p.a7 - p.a5) + (p.a6 - p.a2 * p.a7) * (p.a3 - one);
      const Scalar num = p.a2 * p.a4 * (p.a3 - one) * (w + p.a2 * (p.a3 - one));
      const Scalar den = w * (p.a2 + p.a4) + p.a2 * p.a4 * (p.a3 - one);
      add("printed: a6 > a2*a4*(a3-1)[w + a2(a3-1)] / (w(a2+a4) + a2*a4*(a3-1))",
          den != Scalar(0) && p.a6 > num / den);
      // Routh-Hurwitz for L = l^3 + a2 x l^2 + x(a4 y + a6 z) l + a4 a7 x y z
      // with x = s/a4, y = v/(a4 a7), z = w/(a4 a7).
      const Scalar s = p.a3 - one;
      const Scalar v = p.a4 * (p.a5 - one) - p.a6 * s;
      const bool rh = add("Routh-Hurwitz: a3 > 1, (a3-1)*v*w > 0, a2(a3-1)(a4*v + a6*w) > a4*v*w "
                          "with v = a4(a5-1) - a6(a3-1)",
                          s > Scalar(0) && s * v * w > Scalar(0) &&
                              p.a2 * s * (p.a4 * v + p.a6 * w) > p.a4 * v * w);
      const auto e4 = detail::equilibrium_point(p, EquilibriumKind::E4);
      const Spectrum<Scalar> spec = eigenvalues(jacobian(p, e4));
      bool all_above = true;
      for (const auto& l : spec) all_above = all_above && l.imag() == Scalar(0) && l.real() > thr;
      add("lambda_{1,2,3} of E4 real and > 1/(1-alpha)", all_above);
      add("caputo", rh);
      add("cf", rh || all_above);
      break;
    }
  }
  return out;
}

template <typename Scalar>
struct EquilibriumReport {
  Equilibrium<Scalar> equilibrium;
  Spectrum<Scalar> spectrum;
  CubicCoefficients<Scalar> cubic;
  CubicAnalysis<Scalar> analysis;
  StabilityVerdict<Scalar> caputo;
  std::optional<StabilityVerdict<Scalar>> cf_theorem;  // empty at alpha = 1
  std::optional<StabilityVerdict<Scalar>> cf_disk;
  std::vector<Condition> table1;
  std::optional<std::array<RegionClass, 3>> regions;
};

template <typename Scalar>
std::vector<EquilibriumReport<Scalar>> equilibrium_report(const ModelParams<Scalar>& p,
                                                          FractionalOrder<Scalar> order) {
  std::vector<EquilibriumReport<Scalar>> reports;
  for (const auto& eq : equilibria(p)) {
    EquilibriumReport<Scalar> r;
    r.equilibrium = eq;
    r.cubic = characteristic_cubic(jacobian(p, eq.point));
    r.analysis = cubic_analysis(r.cubic);
    r.spectrum = cubic_roots(r.cubic);
    r.caputo = caputo_stable(r.spectrum, order);
    if (!order.is_classical()) {
      r.cf_theorem = cf_stable_theorem(r.spectrum, order);
      r.cf_disk = cf_stable_disk(r.spectrum, order);
      std::array<RegionClass, 3> regions{};
      for (std::size_t i = 0; i < 3; ++i) regions[i] = classify_region(r.spectrum[i], order);
      r.regions = regions;
    }
    r.table1 = table1_conditions(p, order, eq.kind);
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace fracdyn
