#pragma once

#include <cstddef>
#include <string_view>

#include "hookfit/dataset.hpp"
#include "hookfit/fitting.hpp"

namespace hookfit {

enum class TestKind { vuong, lrt };
enum class Verdict { first, second, indistinguishable };

std::string_view to_string(TestKind kind) noexcept;
std::string_view to_string(Verdict verdict) noexcept;

struct ComparisonOutcome {
  TestKind kind;
  double statistic;
  double threshold_05;
  double threshold_01;
  Verdict better;
  std::size_t n;
  bool significant_05;
  bool significant_01;
  // Vuong only: the pointwise log-likelihood ratios have zero spread.
  bool degenerate = false;
};

// Two-sided normal critical values for the Vuong statistic.
inline constexpr double kVuongCritical05 = 1.959963984540054;
inline constexpr double kVuongCritical01 = 2.5758293035489004;
// Chi-square(1) critical values for the likelihood-ratio test.
inline constexpr double kChiSquare1Critical05 = 3.841;
inline constexpr double kChiSquare1Critical01 = 6.635;
// Slack allowed on the nesting inequality before it counts as a failure.
inline constexpr double kNestingTolerance = 1e-6;

// Vuong closeness test with the Schwarz correction
//   z = (sum_i l_i - (p_a - p_b) / 2 * ln n) / (sqrt(n) * s),
// l_i = log p_a(x_i) - log p_b(x_i), s the sample standard deviation of l_i.
// Positive z favours `first`.
ComparisonOutcome vuong_test(const FitResult& first, const FitResult& second,
                             const TruncatedView& data);

// Likelihood-ratio test of the power law nested in the hooked power law:
// 2 * (negLL_pl - negLL_hooked) against chi-square(1). Throws
// ConsistencyError when the hooked fit is worse than the power law by more
// than kNestingTolerance.
ComparisonOutcome lrt_test(const FitResult& power_law, const FitResult& hooked);
ComparisonOutcome lrt_from_neg_log_likelihoods(double neg_ll_power_law,
                                               double neg_ll_hooked,
                                               std::size_t n);

}  // namespace hookfit
