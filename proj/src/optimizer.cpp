#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hookfit/errors.hpp"

namespace hookfit::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::array<double, 2> project(std::array<double, 2> x, const Box& box,
                              int dims) {
  for (int i = 0; i < dims; ++i) {
    x[i] = std::clamp(x[i], box.lower[i], box.upper[i]);
  }
  return x;
}

double value_or_inf(const Objective& f, const std::array<double, 2>& x) {
  try {
    const double v = f(x, false).value;
    return std::isfinite(v) ? v : kInf;
  } catch (const ParameterError&) {
    return kInf;
  }
}

// Newton-type direction restricted to the free coordinates.
std::array<double, 2> descent_direction(const Derivatives& d,
                                        const std::array<bool, 2>& free,
                                        int dims) {
  std::array<double, 2> dir{0.0, 0.0};
  const auto& g = d.gradient;
  const auto& h = d.hessian;
  if (dims == 2 && free[0] && free[1]) {
    double a = h[0], b = h[1], c = h[2];
    // Smallest eigenvalue of [[a, b], [b, c]].
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    const double lambda_min = mean - radius;
    const double scale = std::max({std::abs(a), std::abs(c), 1e-12});
    if (lambda_min <= 1e-10 * scale) {
      const double shift = -lambda_min + 1e-6 * scale;
      a += shift;
      c += shift;
    }
    const double det = a * c - b * b;
    dir[0] = -(c * g[0] - b * g[1]) / det;
    dir[1] = -(a * g[1] - b * g[0]) / det;
    return dir;
  }
  for (int i = 0; i < dims; ++i) {
    if (!free[i]) continue;
    const double hii = i == 0 ? h[0] : h[2];
    dir[i] = -g[i] / (hii > 0.0 ? hii : std::max(std::abs(hii), 1.0));
  }
  return dir;
}

}  // namespace

OptimizerResult minimize_in_box(const Objective& objective,
                                std::array<double, 2> start, const Box& box,
                                const OptimizerSettings& settings) {
  const int dims = settings.dimensions;
  OptimizerResult result;
  std::array<double, 2> x = project(start, box, dims);
  Derivatives d = objective(x, true);
  if (!std::isfinite(d.value)) {
    throw ParameterError("objective is not finite at the starting point");
  }

  auto projected_gradient = [&](const Derivatives& at,
                                const std::array<double, 2>& pt,
                                std::array<bool, 2>& free) {
    double norm2 = 0.0;
    for (int i = 0; i < dims; ++i) {
      const double gi = at.gradient[i];
      const bool pinned = (pt[i] <= box.lower[i] && gi > 0.0) ||
                          (pt[i] >= box.upper[i] && gi < 0.0);
      free[i] = !pinned;
      if (!pinned) norm2 += gi * gi;
    }
    return std::sqrt(norm2);
  };

  std::array<bool, 2> free{true, dims == 2};
  int iter = 0;
  int stalls = 0;
  for (; iter < settings.max_iterations; ++iter) {
    const double pg = projected_gradient(d, x, free);
    result.gradient_norm = pg;
    if (pg < settings.gradient_tolerance) {
      result.converged = true;
      break;
    }

    const double noise =
        16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(d.value));
    bool moved = false;
    std::array<double, 2> candidate = x;
    double candidate_value = d.value;

    for (int attempt = 0; attempt < 2 && !moved; ++attempt) {
      std::array<double, 2> dir{};
      if (attempt == 0) {
        dir = descent_direction(d, free, dims);
      } else {
        // Diagonally scaled steepest descent as a fallback.
        for (int i = 0; i < dims; ++i) {
          if (!free[i]) continue;
          const double hii = i == 0 ? d.hessian[0] : d.hessian[2];
          dir[i] = -d.gradient[i] / std::max(std::abs(hii), 1e-8);
        }
      }
      double slope = 0.0;
      for (int i = 0; i < dims; ++i) slope += d.gradient[i] * dir[i];
      if (!(slope < 0.0)) continue;

      double t = 1.0;
      for (int k = 0; k < 80; ++k, t *= 0.5) {
        std::array<double, 2> trial = x;
        for (int i = 0; i < dims; ++i) trial[i] += t * dir[i];
        trial = project(trial, box, dims);
        if (trial == x) break;
        double predicted = 0.0;
        for (int i = 0; i < dims; ++i) {
          predicted += d.gradient[i] * (trial[i] - x[i]);
        }
        const double v = value_or_inf(objective, trial);
        if (v <= d.value + 1e-4 * std::min(predicted, 0.0) + noise) {
          candidate = trial;
          candidate_value = v;
          moved = true;
          break;
        }
      }
    }
    if (!moved) break;

    double step = 0.0;
    for (int i = 0; i < dims; ++i) {
      step = std::max(step, std::abs(candidate[i] - x[i]) /
                                (1.0 + std::abs(x[i])));
    }
    stalls = (step < 1e-15 || candidate_value >= d.value) ? stalls + 1 : 0;
    x = candidate;
    d = objective(x, true);
    if (stalls >= 5) {
      ++iter;
      break;
    }
  }

  result.point = x;
  result.value = d.value;
  result.iterations = iter;
  result.gradient_norm = projected_gradient(d, x, free);
  result.converged = result.gradient_norm < settings.gradient_tolerance;
  return result;
}

}  // namespace hookfit::detail
