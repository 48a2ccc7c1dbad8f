#pragma once

// Built-in scenarios: the three worked examples of the three-species model.

#include "fracdyn/lotka.hpp"

#include <array>
#include <string>
#include <vector>

namespace fracdyn {

struct ExampleScenario {
  std::string name;
  ModelParams<double> params;
  State3<double> initial;
  std::vector<double> alphas;  // orders at which the example is evaluated
};

inline ExampleScenario example1() {
  return {"example1", ModelParams<double>::from_array({3, 0.5, 4, 3, 4, 9, 4}), {0.5, 0.9, 0.1},
          {0.98, 0.66}};
}

inline ExampleScenario example2() {
  return {"example2", ModelParams<double>::from_array({3, 0.5, 4, 3, 14, 9, 4}), {2, 2, 3}, {0.6}};
}

// The commonly printed coefficient list for this example repeats "a2" and
// gives a2 = 0.5. Only a2 = 0.05, a3 = 4 reproduce its equilibria
// (160, 0, 0), (0.666, 0, 7.966), (3, 7.85, 0) and spectrum (-8, 157, 1434).
inline ExampleScenario example3() {
  return {"example3", ModelParams<double>::from_array({8, 0.05, 4, 1, 7, 9, 4}), {0.5, 0.1, 5},
          {0.4}};
}

inline std::array<ExampleScenario, 3> all_examples() { return {example1(), example2(), example3()}; }

}  // namespace fracdyn
