#include "hookfit/comparison.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hookfit/errors.hpp"

namespace hookfit {

std::string_view to_string(TestKind kind) noexcept {
  return kind == TestKind::vuong ? "vuong" : "lrt";
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::first:
      return "first";
    case Verdict::second:
      return "second";
    case Verdict::indistinguishable:
      return "indistinguishable";
  }
  return "?";
}

ComparisonOutcome vuong_test(const FitResult& first, const FitResult& second,
                             const TruncatedView& data) {
  if (first.x_min != second.x_min || first.x_min != data.x_min()) {
    throw UsageError("Vuong test needs both fits on the same x_min as the data");
  }
  const std::size_t n = data.n_tail();
  ComparisonOutcome out{TestKind::vuong,  0.0, kVuongCritical05,
                        kVuongCritical01, Verdict::indistinguishable,
                        n,                false, false};
  if (n < 2) {
    out.degenerate = true;
    return out;
  }

  // Work on distinct values with multiplicities; the statistic only depends
  // on the multiset of pointwise ratios.
  const auto hist = data.histogram();
  std::vector<double> ratios;
  ratios.reserve(hist.size());
  double sum = 0.0;
  for (const auto& [x, c] : hist) {
    const double r = first.dist.log_pmf(x) - second.dist.log_pmf(x);
    ratios.push_back(r);
    sum += static_cast<double>(c) * r;
  }
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  double ss = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const double d = ratios[i] - mean;
    ss += static_cast<double>(hist[i].multiplicity) * d * d;
  }
  const double sd = std::sqrt(ss / (nd - 1.0));
  if (!(sd > 1e-14 * std::max(1.0, std::abs(mean)))) {
    out.degenerate = true;
    return out;
  }

  const int extra = parameter_count(first.kind()) - parameter_count(second.kind());
  const double correction = 0.5 * extra * std::log(nd);
  out.statistic = (sum - correction) / (std::sqrt(nd) * sd);
  out.significant_05 = std::abs(out.statistic) >= kVuongCritical05;
  out.significant_01 = std::abs(out.statistic) >= kVuongCritical01;
  if (out.significant_05) {
    out.better = out.statistic > 0.0 ? Verdict::first : Verdict::second;
  }
  return out;
}

ComparisonOutcome lrt_from_neg_log_likelihoods(double neg_ll_power_law,
                                               double neg_ll_hooked,
                                               std::size_t n) {
  const double gap = neg_ll_power_law - neg_ll_hooked;
  if (gap < -kNestingTolerance) {
    throw ConsistencyError(
        "hooked power law fit is worse than the nested power law by " +
        std::to_string(-gap));
  }
  ComparisonOutcome out{TestKind::lrt,         std::max(0.0, 2.0 * gap),
                        kChiSquare1Critical05, kChiSquare1Critical01,
                        Verdict::indistinguishable,
                        n,                     false, false};
  out.significant_05 = out.statistic >= kChiSquare1Critical05;
  out.significant_01 = out.statistic >= kChiSquare1Critical01;
  // The nested model can never be significantly better.
  if (out.significant_05) out.better = Verdict::second;
  return out;
}

ComparisonOutcome lrt_test(const FitResult& power_law, const FitResult& hooked) {
  if (power_law.kind() != Kind::power_law || hooked.kind() != Kind::hooked) {
    throw UsageError("LRT compares a power-law fit with a hooked power-law fit");
  }
  if (power_law.x_min != hooked.x_min || power_law.n_tail != hooked.n_tail) {
    throw UsageError("LRT needs both fits on the same data");
  }
  return lrt_from_neg_log_likelihoods(power_law.neg_log_likelihood,
                                      hooked.neg_log_likelihood,
                                      power_law.n_tail);
}

}  // namespace hookfit
