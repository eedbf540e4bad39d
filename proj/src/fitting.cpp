#include "hookfit/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hookfit/errors.hpp"
#include "hookfit/parallel.hpp"
#include "optimizer.hpp"

namespace hookfit {

namespace {

void require_fittable(const TruncatedView& data, std::size_t min_points,
                      std::string_view what) {
  if (data.n_tail() < min_points) {
    throw DegenerateDataError(std::string(what) + " fit needs at least " +
                              std::to_string(min_points) + " points, got " +
                              std::to_string(data.n_tail()));
  }
  if (data.distinct_values() < 2) {
    throw DegenerateDataError(std::string(what) +
                              " fit needs at least two distinct values");
  }
}

FitResult make_result(const DistributionSpec& spec, const TruncatedView& data,
                      bool converged, int iterations, double gradient_norm) {
  DiscreteDistribution dist(spec, data.x_min());
  const double nll = neg_log_likelihood(spec, data);
  return FitResult{std::move(dist), nll,        data.n_tail(), data.x_min(),
                   converged,       iterations, gradient_norm};
}

}  // namespace

FitResult fit_power_law(const TruncatedView& data) {
  require_fittable(data, 2, "power law");

  // d(-LL)/d(alpha) is increasing in alpha: its derivative is n times the
  // variance of ln x under the model. Safeguarded Newton on the bracket.
  auto eval = [&](double alpha) {
    return neg_log_likelihood_derivatives(PowerLawParams{alpha}, data);
  };
  double lo = ParameterBox::alpha_min;
  double hi = ParameterBox::alpha_max;
  const Derivatives at_lo = eval(lo);
  const Derivatives at_hi = eval(hi);
  if (at_lo.gradient[0] >= 0.0) {
    return make_result(PowerLawParams{lo}, data, false, 0,
                       std::abs(at_lo.gradient[0]));
  }
  if (at_hi.gradient[0] <= 0.0) {
    return make_result(PowerLawParams{hi}, data, false, 0,
                       std::abs(at_hi.gradient[0]));
  }

  double alpha = 0.5 * (lo + hi);
  Derivatives d = eval(alpha);
  int iterations = 0;
  constexpr int kMaxIterations = 200;
  for (; iterations < kMaxIterations; ++iterations) {
    const double g = d.gradient[0];
    if (g == 0.0) break;
    (g > 0.0 ? hi : lo) = alpha;
    double next = alpha - g / d.hessian[0];
    if (!(d.hessian[0] > 0.0) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    const double step = std::abs(next - alpha);
    alpha = next;
    d = eval(alpha);
    if (step < 1e-3 * FitTolerances::power_law_alpha ||
        hi - lo < 1e-3 * FitTolerances::power_law_alpha) {
      ++iterations;
      break;
    }
  }
  const bool converged = iterations < kMaxIterations;
  return make_result(PowerLawParams{alpha}, data, converged, iterations,
                     std::abs(d.gradient[0]));
}

FitResult fit_lognormal(const TruncatedView& data) {
  require_fittable(data, 3, "lognormal");

  double mean = 0.0;
  for (const auto& [x, c] : data.histogram()) {
    mean += static_cast<double>(c) * std::log(static_cast<double>(x));
  }
  mean /= static_cast<double>(data.n_tail());
  double var = 0.0;
  for (const auto& [x, c] : data.histogram()) {
    const double d = std::log(static_cast<double>(x)) - mean;
    var += static_cast<double>(c) * d * d;
  }
  const double sd = std::sqrt(var / static_cast<double>(data.n_tail() - 1));

  const detail::Box box{{ParameterBox::mu_min, ParameterBox::sigma_min},
                        {ParameterBox::mu_max, ParameterBox::sigma_max}};
  const detail::OptimizerSettings settings{
      2, FitTolerances::lognormal_gradient, FitTolerances::lognormal_iterations};
  const detail::Objective objective = [&](const std::array<double, 2>& p,
                                          bool derivs) {
    return neg_log_likelihood_derivatives(LognormalParams{p[0], p[1]}, data,
                                          derivs);
  };
  const auto best = detail::minimize_in_box(objective, {mean, sd}, box, settings);
  return make_result(LognormalParams{best.point[0], best.point[1]}, data,
                     best.converged, best.iterations, best.gradient_norm);
}

FitResult fit_hooked(const TruncatedView& data) {
  require_fittable(data, 3, "hooked power law");

  const detail::Box box{{ParameterBox::alpha_min, ParameterBox::B_min},
                        {ParameterBox::alpha_max, ParameterBox::B_max}};
  const detail::OptimizerSettings settings{
      2, FitTolerances::hooked_gradient, FitTolerances::hooked_iterations};
  const detail::Objective objective = [&](const std::array<double, 2>& p,
                                          bool derivs) {
    return neg_log_likelihood_derivatives(HookedPowerLawParams{p[0], p[1]},
                                          data, derivs);
  };

  // Fixed grid of starts plus the power-law optimum at B = 0, which makes
  // the hooked fit never worse than the power law it contains.
  const FitResult power_law = fit_power_law(data);
  const double alpha_pl = std::get<PowerLawParams>(power_law.dist.spec()).alpha;
  const std::array<std::array<double, 2>, 5> starts{{
      {1.5, 0.5}, {3.0, 0.5}, {1.5, 20.0}, {3.0, 20.0}, {alpha_pl, 0.0}}};

  std::optional<detail::OptimizerResult> best;
  int iterations = 0;
  for (const auto& start : starts) {
    const auto r = detail::minimize_in_box(objective, start, box, settings);
    iterations += r.iterations;
    if (!best || r.value < best->value) best = r;
  }
  return make_result(HookedPowerLawParams{best->point[0], best->point[1]}, data,
                     best->converged, iterations, best->gradient_norm);
}

FitResult fit(Kind kind, const TruncatedView& data) {
  switch (kind) {
    case Kind::power_law:
      return fit_power_law(data);
    case Kind::hooked:
      return fit_hooked(data);
    case Kind::lognormal:
      return fit_lognormal(data);
  }
  throw UsageError("unknown distribution kind");
}

double ks_distance(const DiscreteDistribution& dist, const TruncatedView& data) {
  if (dist.x_min() != data.x_min()) {
    throw UsageError("KS distance needs matching x_min");
  }
  const double n = static_cast<double>(data.n_tail());
  const auto hist = data.histogram();
  double model_cdf = 0.0;
  double empirical_cdf = 0.0;
  double worst = 0.0;
  std::size_t next = 0;
  for (Count x = data.x_min(); x <= data.max_value(); ++x) {
    model_cdf += dist.pmf(x);
    if (next < hist.size() && hist[next].value == x) {
      empirical_cdf += static_cast<double>(hist[next].multiplicity) / n;
      ++next;
    }
    worst = std::max(worst, std::abs(std::min(model_cdf, 1.0) - empirical_cdf));
  }
  return worst;
}

const XminCandidate& XminScanResult::best() const {
  const auto it = std::find_if(
      per_xmin.begin(), per_xmin.end(),
      [this](const XminCandidate& c) { return c.x_min == best_x_min; });
  return *it;
}

std::vector<Count> default_x_min_candidates(const CountDataset& data,
                                            std::size_t min_tail) {
  std::vector<Count> sorted = data.counts();
  std::sort(sorted.begin(), sorted.end());
  std::vector<Count> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    if (sorted.size() - i < min_tail) break;
    out.push_back(sorted[i]);
  }
  return out;
}

XminScanResult scan_x_min(const CountDataset& data, Kind kind,
                          std::span<const Count> candidates, unsigned threads) {
  if (candidates.empty()) throw UsageError("x_min candidate range is empty");
  std::vector<Count> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.front() < 1) throw ParameterError("x_min candidates must be >= 1");

  std::vector<Count> admissible;
  for (const Count k : sorted) {
    const auto tail = static_cast<std::size_t>(std::count_if(
        data.counts().begin(), data.counts().end(),
        [k](Count c) { return c >= k; }));
    if (tail >= kMinScanTail) admissible.push_back(k);
  }
  if (admissible.empty()) {
    throw DegenerateDataError("every x_min candidate leaves fewer than " +
                              std::to_string(kMinScanTail) + " observations");
  }

  std::vector<std::optional<XminCandidate>> slots(admissible.size());
  parallel_for(admissible.size(), threads, [&](std::size_t i) {
    const TruncatedView tail = truncate(data, admissible[i]);
    XminCandidate c{admissible[i], tail.n_tail(), std::nullopt,
                    std::numeric_limits<double>::infinity()};
    try {
      c.fit = fit(kind, tail);
      c.score = ks_distance(c.fit->dist, tail);
    } catch (const DegenerateDataError&) {
    }
    slots[i] = std::move(c);
  });

  XminScanResult result{kind, 0, {}};
  double best_score = std::numeric_limits<double>::infinity();
  for (auto& slot : slots) {
    if (slot->score < best_score) {
      best_score = slot->score;
      result.best_x_min = slot->x_min;
    }
    result.per_xmin.push_back(std::move(*slot));
  }
  if (!std::isfinite(best_score)) {
    throw DegenerateDataError("no x_min candidate could be fitted");
  }
  return result;
}

}  // namespace hookfit
