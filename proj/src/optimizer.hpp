#pragma once

#include <array>
#include <functional>

#include "hookfit/objective.hpp"

namespace hookfit::detail {

struct Box {
  std::array<double, 2> lower;
  std::array<double, 2> upper;
};

struct OptimizerSettings {
  int dimensions = 2;
  double gradient_tolerance = 1e-6;
  int max_iterations = 10'000;
};

struct OptimizerResult {
  std::array<double, 2> point{};
  double value = 0.0;
  double gradient_norm = 0.0;  // projected gradient at `point`
  int iterations = 0;
  bool converged = false;
};

// Objective callback. Must throw or return a non-finite value outside its
// domain; the second argument requests gradient and Hessian.
using Objective =
    std::function<Derivatives(const std::array<double, 2>&, bool)>;

// Projected Newton descent on a box. The Newton direction is computed on the
// free variables, with the Hessian shifted to positive definiteness when
// needed, followed by an Armijo backtracking search along the projected path.
// Converges when the projected gradient norm falls below the tolerance.
OptimizerResult minimize_in_box(const Objective& objective,
                                std::array<double, 2> start, const Box& box,
                                const OptimizerSettings& settings);

}  // namespace hookfit::detail
