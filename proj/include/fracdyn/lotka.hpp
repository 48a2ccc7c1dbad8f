#pragma once

// Three-species Lotka-Volterra system (one prey x, two predators y, z):
//
//   D^alpha x = x (a1 - a2 x - y - z)
//   D^alpha y = y ((1 - a3) + a4 x)
//   D^alpha z = z ((1 - a5) + a6 x + a7 y)

#include "fracdyn/integrators.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracdyn {

template <typename Scalar>
using State3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Jacobian3 = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
struct ModelParams {
  Scalar a1{}, a2{}, a3{}, a4{}, a5{}, a6{}, a7{};

  static ModelParams from_array(const std::array<Scalar, 7>& a) {
    ModelParams p{a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
    p.validate();
    return p;
  }
  std::array<Scalar, 7> to_array() const { return {a1, a2, a3, a4, a5, a6, a7}; }

  void validate() const {
    const auto a = to_array();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!(a[i] > Scalar(0)) || !std::isfinite(a[i]))
        throw std::invalid_argument("coefficient a" + std::to_string(i + 1) +
                                    " must be positive and finite");
    }
  }

  Scalar max_abs() const {
    const auto a = to_array();
    return *std::max_element(a.begin(), a.end());
  }
};

template <typename Scalar>
State3<Scalar> rhs(const ModelParams<Scalar>& p, const State3<Scalar>& s) {
  const Scalar x = s(0), y = s(1), z = s(2);
  return {x * (p.a1 - p.a2 * x - y - z), y * ((Scalar(1) - p.a3) + p.a4 * x),
          z * ((Scalar(1) - p.a5) + p.a6 * x + p.a7 * y)};
}

template <typename Scalar>
Jacobian3<Scalar> jacobian(const ModelParams<Scalar>& p, const State3<Scalar>& s) {
  const Scalar x = s(0), y = s(1), z = s(2);
  Jacobian3<Scalar> j;
  j << p.a1 - Scalar(2) * p.a2 * x - y - z, -x, -x,
       p.a4 * y, Scalar(1) - p.a3 + p.a4 * x, Scalar(0),
       p.a6 * z, p.a7 * z, p.a6 * x - p.a5 + p.a7 * y + Scalar(1);
  return j;
}

/// The model as a generic vector field, with its analytic Jacobian.
template <typename Scalar>
VectorField<Scalar> lotka_field(const ModelParams<Scalar>& p) {
  VectorField<Scalar> field;
  field.dimension = 3;
  field.evaluate = [p](Scalar, const Vector<Scalar>& s) -> Vector<Scalar> {
    return rhs(p, State3<Scalar>(s));
  };
  field.jacobian = [p](Scalar, const Vector<Scalar>& s) -> Matrix<Scalar> {
    return jacobian(p, State3<Scalar>(s));
  };
  return field;
}

enum class EquilibriumKind { E0 = 0, E1, E2, E3, E4 };

inline const char* to_string(EquilibriumKind kind) {
  static constexpr const char* names[] = {"E0", "E1", "E2", "E3", "E4"};
  return names[static_cast<int>(kind)];
}

inline constexpr std::array<EquilibriumKind, 5> kAllEquilibria = {
    EquilibriumKind::E0, EquilibriumKind::E1, EquilibriumKind::E2, EquilibriumKind::E3,
    EquilibriumKind::E4};

struct Condition {
  std::string name;
  bool satisfied{};
};

template <typename Scalar>
struct Equilibrium {
  EquilibriumKind kind{};
  State3<Scalar> point = State3<Scalar>::Zero();
  bool admissible{};
  std::vector<Condition> conditions;
};

struct ExistenceEntry {
  EquilibriumKind kind{};
  std::string condition;
  bool satisfied{};
};

namespace detail {

template <typename Scalar>
struct ExistenceCheck {
  std::string name;
  Scalar margin;  // >= 0 when the condition holds
};

template <typename Scalar>
std::vector<ExistenceCheck<Scalar>> existence_checks(const ModelParams<Scalar>& p,
                                                     EquilibriumKind kind) {
  const Scalar one(1);
  switch (kind) {
    case EquilibriumKind::E0:
    case EquilibriumKind::E1:
      return {};
    case EquilibriumKind::E2:
      return {{"a5 >= 1", p.a5 - one},
              {"a1*a6 >= a2*(a5-1)", p.a1 * p.a6 - p.a2 * (p.a5 - one)}};
    case EquilibriumKind::E3:
      return {{"a3 >= 1", p.a3 - one},
              {"a1*a4 >= a2*(a3-1)", p.a1 * p.a4 - p.a2 * (p.a3 - one)}};
    case EquilibriumKind::E4: {
      std::vector<ExistenceCheck<Scalar>> checks{
          {"a3 >= 1", p.a3 - one},
          {"a4*(a5-1) >= a6*(a3-1)", p.a4 * (p.a5 - one) - p.a6 * (p.a3 - one)}};
      // Sign of z* at E4 hinges on K = 1 + a1*a7 - a5.
      const Scalar k = one + p.a1 * p.a7 - p.a5;
      const Scalar bound = (p.a2 * p.a7 - p.a6) * (p.a3 - one);
      if (k > Scalar(0))
        checks.push_back({"a4 >= (a2*a7-a6)*(a3-1)/(1+a1*a7-a5)", p.a4 - bound / k});
      else if (k < Scalar(0))
        checks.push_back({"a4 <= (a2*a7-a6)*(a3-1)/(1+a1*a7-a5)", bound / k - p.a4});
      else
        checks.push_back({"(a6-a2*a7)*(a3-1) >= 0 [1+a1*a7-a5 = 0]", -bound});
      return checks;
    }
  }
  return {};
}

template <typename Scalar>
State3<Scalar> equilibrium_point(const ModelParams<Scalar>& p, EquilibriumKind kind) {
  const Scalar one(1), zero(0);
  switch (kind) {
    case EquilibriumKind::E0:
      return State3<Scalar>::Zero();
    case EquilibriumKind::E1:
      return {p.a1 / p.a2, zero, zero};
    case EquilibriumKind::E2:
      return {(p.a5 - one) / p.a6, zero, p.a1 - p.a2 * (p.a5 - one) / p.a6};
    case EquilibriumKind::E3:
      return {(p.a3 - one) / p.a4, p.a1 - p.a2 * (p.a3 - one) / p.a4, zero};
    case EquilibriumKind::E4: {
      const Scalar denom = p.a7 * p.a4;
      return {(p.a3 - one) / p.a4, (p.a4 * (p.a5 - one) - p.a6 * (p.a3 - one)) / denom,
              (p.a4 * (one + p.a1 * p.a7 - p.a5) + (p.a6 - p.a2 * p.a7) * (p.a3 - one)) / denom};
    }
  }
  return State3<Scalar>::Zero();
}

}  // namespace detail

/// Relative tolerance for boundary decisions in admissibility.
inline constexpr double kBoundaryTolerance = 1e-12;

/// All five equilibria in fixed order E0..E4, admissible or not.
/// Admissibility is point non-negativity together with the symbolic existence
/// conditions; a condition violated only within the boundary tolerance defers
/// to the sign of the point.
template <typename Scalar>
std::array<Equilibrium<Scalar>, 5> equilibria(const ModelParams<Scalar>& p) {
  p.validate();
  const Scalar tol = Scalar(kBoundaryTolerance) * std::max(Scalar(1), p.max_abs() * p.max_abs());
  std::array<Equilibrium<Scalar>, 5> out;
  for (const EquilibriumKind kind : kAllEquilibria) {
    Equilibrium<Scalar>& e = out[static_cast<std::size_t>(kind)];
    e.kind = kind;
    e.point = detail::equilibrium_point(p, kind);
    const bool nonnegative = (e.point.array() >= -tol).all();
    bool conditions_hold = true;
    for (const auto& check : detail::existence_checks(p, kind)) {
      const bool satisfied = check.margin >= Scalar(0);
      e.conditions.push_back({check.name, satisfied});
      if (!satisfied && -check.margin > tol) conditions_hold = false;
    }
    e.admissible = nonnegative && conditions_hold;
  }
  return out;
}

template <typename Scalar>
std::vector<ExistenceEntry> existence_report(const ModelParams<Scalar>& p) {
  p.validate();
  std::vector<ExistenceEntry> report;
  for (const EquilibriumKind kind : kAllEquilibria) {
    for (const auto& check : detail::existence_checks(p, kind))
      report.push_back({kind, check.name, check.margin >= Scalar(0)});
  }
  return report;
}

}  // namespace fracdyn
