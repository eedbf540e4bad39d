#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hookfit/dataset.hpp"
#include "hookfit/kernels.hpp"
#include "hookfit/objective.hpp"

namespace hookfit {

// Box used by every optimizer and by the simulation studies.
struct ParameterBox {
  static constexpr double alpha_min = 1.0 + 1e-6;
  static constexpr double alpha_max = 20.0;
  static constexpr double B_min = -0.999;
  static constexpr double B_max = 1e6;
  static constexpr double mu_min = -1000.0;
  static constexpr double mu_max = 20.0;
  static constexpr double sigma_min = 1e-6;
  static constexpr double sigma_max = 50.0;
};

struct FitTolerances {
  static constexpr double power_law_alpha = 1e-6;  // bracket width
  static constexpr double hooked_gradient = 1e-6;
  static constexpr int hooked_iterations = 50'000;
  static constexpr double lognormal_gradient = 1e-7;
  static constexpr int lognormal_iterations = 10'000;
};

struct FitResult {
  DiscreteDistribution dist;
  double neg_log_likelihood;
  std::size_t n_tail;
  Count x_min;
  bool converged;
  int iterations;
  double gradient_norm_at_exit;

  Kind kind() const noexcept { return dist.kind(); }
};

// Maximum-likelihood fits on a truncated view. Non-convergence is reported
// through FitResult::converged; data that cannot identify the parameters
// (too few points, a single distinct value) throws DegenerateDataError.
FitResult fit_power_law(const TruncatedView& data);
FitResult fit_lognormal(const TruncatedView& data);
FitResult fit_hooked(const TruncatedView& data);
FitResult fit(Kind kind, const TruncatedView& data);

// Largest absolute difference between the fitted and empirical CDFs over
// the integers from x_min to the largest observation.
double ks_distance(const DiscreteDistribution& dist, const TruncatedView& data);

inline constexpr std::size_t kMinScanTail = 10;

struct XminCandidate {
  Count x_min;
  std::size_t n_tail;
  std::optional<FitResult> fit;  // empty when the tail could not be fitted
  double score;                  // KS distance; +inf without a fit
};

struct XminScanResult {
  Kind kind;
  Count best_x_min;
  std::vector<XminCandidate> per_xmin;

  const XminCandidate& best() const;
};

// Distinct observed values that leave at least `min_tail` observations.
std::vector<Count> default_x_min_candidates(const CountDataset& data,
                                            std::size_t min_tail = kMinScanTail);

// Fits `kind` at every candidate x_min and keeps the one with the smallest
// KS distance, preferring the smaller x_min on ties. Candidates leaving fewer
// than kMinScanTail observations are skipped. threads = 0 uses all cores;
// the result does not depend on the thread count.
XminScanResult scan_x_min(const CountDataset& data, Kind kind,
                          std::span<const Count> candidates,
                          unsigned threads = 1);

}  // namespace hookfit
