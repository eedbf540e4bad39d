#include "hookfit/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "hookfit/comparison.hpp"
#include "hookfit/errors.hpp"
#include "hookfit/parallel.hpp"

namespace hookfit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) {
    throw UsageError(std::string(name) + " axis is empty");
  }
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) {
      throw UsageError(std::string(name) + " axis must be strictly increasing");
    }
  }
}

void check_study(const std::vector<Count>& n_grid, const StudyOptions& options) {
  if (options.replicates < 2) {
    throw ParameterError("a CI study needs at least 2 replicates");
  }
  if (n_grid.empty()) throw UsageError("sample-size grid is empty");
  for (const Count n : n_grid) {
    if (n < 3) throw ParameterError("sample sizes must be >= 3");
  }
}

struct Replicate {
  std::vector<double> estimates;  // empty when excluded
};

// Runs every (cell, replicate) pair, seeded by derive_seed(seed, cell, rep).
std::vector<Replicate> run_replicates(
    const std::vector<std::pair<DistributionSpec, Count>>& cells, Kind fit_kind,
    const StudyOptions& options) {
  const auto reps = static_cast<std::size_t>(options.replicates);
  std::vector<Replicate> out(cells.size() * reps);
  // One distribution per cell; normalizers are the expensive part.
  std::vector<std::optional<DiscreteDistribution>> dists(cells.size());
  parallel_for(cells.size(), options.threads, [&](std::size_t c) {
    dists[c].emplace(cells[c].first, 1);
  });
  parallel_for(out.size(), options.threads, [&](std::size_t task) {
    const std::size_t c = task / reps;
    const std::size_t r = task % reps;
    const auto draws = sample(*dists[c], static_cast<std::size_t>(cells[c].second),
                              derive_seed(options.seed, c, r));
    try {
      const FitResult f = fit(fit_kind, TruncatedView(draws, 1));
      if (f.converged) out[task].estimates = parameter_values(f.dist.spec());
    } catch (const DegenerateDataError&) {
    }
  });
  return out;
}

CIWidthCell summarize(double p1, double p2, Count n,
                      const std::vector<Replicate>& reps, std::size_t first,
                      std::size_t count, std::size_t index) {
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t r = first; r < first + count; ++r) {
    if (!reps[r].estimates.empty()) values.push_back(reps[r].estimates[index]);
  }
  std::sort(values.begin(), values.end());
  CIWidthCell cell{p1, p2, n, kNaN, kNaN, kNaN, values.size(),
                   count - values.size(), false};
  cell.flagged = static_cast<double>(cell.excluded) >
                 kMaxExcludedFraction * static_cast<double>(count);
  if (values.size() >= 2) {
    cell.lower = sorted_quantile(values, 0.05);
    cell.upper = sorted_quantile(values, 0.95);
    cell.width = cell.upper - cell.lower;
  }
  return cell;
}

}  // namespace

std::string_view to_string(Target target) noexcept {
  switch (target) {
    case Target::alpha:
      return "alpha";
    case Target::B:
      return "B";
    case Target::mu:
      return "mu";
    case Target::sigma:
      return "sigma";
  }
  return "?";
}

const CIWidthCell& CIWidthGrid::at(std::size_t i, std::size_t j,
                                   std::size_t k) const {
  return cells.at((i * param2_axis.size() + j) * n_axis.size() + k);
}

double sorted_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return kNaN;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CIWidthGrid ci_width_study(Kind kind, const std::vector<double>& alpha_grid,
                           const std::vector<Count>& n_grid,
                           const StudyOptions& options, double B) {
  if (kind == Kind::lognormal) {
    throw UsageError("use lognormal_ci_study for the lognormal");
  }
  check_axis(alpha_grid, "alpha");
  check_study(n_grid, options);
  const double b = kind == Kind::hooked ? B : 0.0;

  std::vector<std::pair<DistributionSpec, Count>> cells;
  for (const double alpha : alpha_grid) {
    const DistributionSpec spec =
        kind == Kind::hooked ? DistributionSpec{HookedPowerLawParams{alpha, b}}
                             : DistributionSpec{PowerLawParams{alpha}};
    validate(spec, 1);
    for (const Count n : n_grid) cells.emplace_back(spec, n);
  }
  const auto reps = run_replicates(cells, kind, options);

  CIWidthGrid grid{kind,
                   Target::alpha,
                   "alpha",
                   kind == Kind::hooked ? "B" : "",
                   alpha_grid,
                   {b},
                   n_grid,
                   options.replicates,
                   options.seed,
                   {}};
  const auto R = static_cast<std::size_t>(options.replicates);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    grid.cells.push_back(summarize(alpha_grid[c / n_grid.size()], b,
                                   cells[c].second, reps, c * R, R, 0));
  }
  return grid;
}

LognormalCIStudy lognormal_ci_study(const std::vector<double>& mu_grid,
                                    const std::vector<double>& sigma_grid,
                                    const std::vector<Count>& n_grid,
                                    const StudyOptions& options) {
  check_axis(mu_grid, "mu");
  check_axis(sigma_grid, "sigma");
  check_study(n_grid, options);

  std::vector<std::pair<DistributionSpec, Count>> cells;
  for (const double mu : mu_grid) {
    for (const double sigma : sigma_grid) {
      const DistributionSpec spec = LognormalParams{mu, sigma};
      validate(spec, 1);
      for (const Count n : n_grid) cells.emplace_back(spec, n);
    }
  }
  const auto reps = run_replicates(cells, Kind::lognormal, options);

  auto make = [&](Target target) {
    return CIWidthGrid{Kind::lognormal, target,   "mu",
                       "sigma",         mu_grid,  sigma_grid,
                       n_grid,          options.replicates,
                       options.seed,    {}};
  };
  LognormalCIStudy study{make(Target::mu), make(Target::sigma)};
  const auto R = static_cast<std::size_t>(options.replicates);
  const std::size_t per_mu = sigma_grid.size() * n_grid.size();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double mu = mu_grid[c / per_mu];
    const double sigma = sigma_grid[(c / n_grid.size()) % sigma_grid.size()];
    study.mu.cells.push_back(
        summarize(mu, sigma, cells[c].second, reps, c * R, R, 0));
    study.sigma.cells.push_back(
        summarize(mu, sigma, cells[c].second, reps, c * R, R, 1));
  }
  return study;
}

std::pair<std::size_t, std::size_t> LLContourGrid::argmin() const {
  std::size_t best = cells.size();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (valid[i] && (best == cells.size() || cells[i] < cells[best])) best = i;
  }
  if (best == cells.size()) throw DegenerateDataError("contour has no valid cell");
  return {best / param2_axis.size(), best % param2_axis.size()};
}

LLContourGrid ll_contour(const TruncatedView& data, Kind kind,
                         const std::vector<double>& param1_axis,
                         const std::vector<double>& param2_axis) {
  if (kind == Kind::power_law) {
    throw UsageError("contours need a two-parameter family (hooked or ln)");
  }
  const auto names = parameter_names(kind);
  check_axis(param1_axis, names[0].c_str());
  check_axis(param2_axis, names[1].c_str());

  LLContourGrid grid{kind, names[0], names[1], param1_axis, param2_axis, {}, {}};
  grid.cells.reserve(param1_axis.size() * param2_axis.size());
  for (const double p1 : param1_axis) {
    for (const double p2 : param2_axis) {
      try {
        grid.cells.push_back(neg_log_likelihood(make_spec(kind, {p1, p2}), data));
        grid.valid.push_back(std::isfinite(grid.cells.back()) ? 1 : 0);
      } catch (const ParameterError&) {
        grid.cells.push_back(kNaN);
        grid.valid.push_back(0);
      }
    }
  }
  return grid;
}

RidgeReport ridge_demo(double true_alpha, double true_B, std::size_t n,
                       std::uint64_t seed) {
  if (n < 100) throw ParameterError("ridge demo needs n >= 100");
  const HookedPowerLawParams truth{true_alpha, true_B};
  const DiscreteDistribution dist(truth, 1);
  const TruncatedView data(sample(dist, n, seed), 1);
  const FitResult fitted = fit_hooked(data);
  const auto fitted_params = std::get<HookedPowerLawParams>(fitted.dist.spec());
  const HookedPowerLawParams hybrid{fitted_params.alpha, true_B};

  RidgeReport report{truth,
                     fitted_params,
                     hybrid,
                     neg_log_likelihood(truth, data),
                     fitted.neg_log_likelihood,
                     neg_log_likelihood(hybrid, data),
                     n,
                     seed,
                     fitted.converged,
                     false};
  report.fit_not_worse =
      report.neg_ll_fitted <= report.neg_ll_true + kNestingTolerance;
  return report;
}

HookedPowerLawParams attachment_to_hooked(const AttachmentParams& p) {
  if (!(p.beta > 0.0 && p.beta < 1.0)) {
    throw ParameterError("attachment probability beta must lie in (0, 1)");
  }
  if (!(p.m > 0.0) || !std::isfinite(p.m)) {
    throw ParameterError("references per paper m must be positive");
  }
  return {1.0 + 1.0 / p.beta, 2.0 * p.m * (1.0 - p.beta) / p.beta};
}

AttachmentParams hooked_to_attachment(const HookedPowerLawParams& h) {
  if (!(h.alpha > 1.0) || !std::isfinite(h.alpha)) {
    throw ParameterError("alpha must exceed 1");
  }
  if (!(h.B >= 0.0) || !std::isfinite(h.B)) {
    throw ParameterError("the attachment model needs B >= 0");
  }
  const double beta = 1.0 / (h.alpha - 1.0);
  if (!(beta < 1.0)) {
    throw ParameterError(
        "alpha <= 2 gives beta >= 1, outside the attachment model");
  }
  return {beta, h.B * beta / (2.0 * (1.0 - beta))};
}

double attachment_probability(const AttachmentParams& p, double k) {
  if (!(p.beta > 0.0 && p.beta < 1.0) || !(p.m > 0.0)) {
    throw ParameterError("invalid attachment parameters");
  }
  const double c = 2.0 * p.m * (1.0 - p.beta);
  return std::exp(std::log(c) / p.beta -
                  (1.0 + 1.0 / p.beta) * std::log(p.beta * k + c));
}

double slope_tolerance_threshold(double T, double B) {
  if (!(T > 0.0 && T < 1.0)) {
    throw ParameterError("slope tolerance T must lie in (0, 1)");
  }
  if (!(B >= 0.0) || !std::isfinite(B)) {
    throw ParameterError("B must be finite and >= 0");
  }
  return ((1.0 - T) / T) * B;
}

double log_log_slope(double alpha, double B, double x) {
  return -alpha * x / (B + x);
}

}  // namespace hookfit
