#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hookfit/dataset.hpp"
#include "hookfit/fitting.hpp"
#include "hookfit/kernels.hpp"
#include "hookfit/rng.hpp"

namespace hookfit {

// ---------------------------------------------------------------------------
// Confidence-interval width studies
// ---------------------------------------------------------------------------

enum class Target { alpha, B, mu, sigma };
std::string_view to_string(Target target) noexcept;

struct CIWidthCell {
  double param1;
  double param2;
  Count n;
  double lower;  // 5th percentile of the fitted target
  double upper;  // 95th percentile
  double width;  // upper - lower
  std::size_t used;
  std::size_t excluded;  // non-convergent or degenerate replicates
  bool flagged;          // excluded > 10% of replicates
};

struct CIWidthGrid {
  Kind kind;
  Target target;
  std::string param1_name;
  std::string param2_name;
  std::vector<double> param1_axis;
  std::vector<double> param2_axis;
  std::vector<Count> n_axis;
  int replicates;
  std::uint64_t seed;
  // Row-major over (param1, param2, n).
  std::vector<CIWidthCell> cells;

  const CIWidthCell& at(std::size_t i, std::size_t j, std::size_t k) const;
};

struct StudyOptions {
  int replicates = 500;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;  // 0 = all cores; results do not depend on it
};

inline constexpr double kMaxExcludedFraction = 0.10;

// Width of the 90% interval (5th to 95th percentile) of fitted alpha when
// fitting `kind` (power_law or hooked) to n points drawn from the same
// family at each alpha in `alpha_grid`, with B fixed (ignored for pl).
CIWidthGrid ci_width_study(Kind kind, const std::vector<double>& alpha_grid,
                           const std::vector<Count>& n_grid,
                           const StudyOptions& options, double B = 10.0);

struct LognormalCIStudy {
  CIWidthGrid mu;
  CIWidthGrid sigma;
};

// The same study for the lognormal; each replicate fit feeds both grids.
LognormalCIStudy lognormal_ci_study(const std::vector<double>& mu_grid,
                                    const std::vector<double>& sigma_grid,
                                    const std::vector<Count>& n_grid,
                                    const StudyOptions& options);

// Linear-interpolation sample quantile (R type 7) of sorted values.
double sorted_quantile(const std::vector<double>& sorted, double p);

// ---------------------------------------------------------------------------
// Likelihood surfaces
// ---------------------------------------------------------------------------

struct LLContourGrid {
  Kind kind;
  std::string param1_name;
  std::string param2_name;
  std::vector<double> param1_axis;
  std::vector<double> param2_axis;
  std::vector<double> cells;        // row-major, NaN where invalid
  std::vector<std::uint8_t> valid;  // 0 where parameters leave the domain

  double at(std::size_t i, std::size_t j) const {
    return cells[i * param2_axis.size() + j];
  }
  // Indices of the smallest valid cell.
  std::pair<std::size_t, std::size_t> argmin() const;
};

// Negative log-likelihood of `data` over a parameter grid; no fitting.
// `kind` must be hooked (alpha, B) or lognormal (mu, sigma).
LLContourGrid ll_contour(const TruncatedView& data, Kind kind,
                         const std::vector<double>& param1_axis,
                         const std::vector<double>& param2_axis);

struct RidgeReport {
  HookedPowerLawParams truth;
  HookedPowerLawParams fitted;
  HookedPowerLawParams hybrid;  // fitted alpha with the true B
  double neg_ll_true;
  double neg_ll_fitted;
  double neg_ll_hybrid;
  std::size_t n;
  std::uint64_t seed;
  bool converged;
  bool fit_not_worse;  // neg_ll_fitted <= neg_ll_true + kNestingTolerance
};

// Samples n points from the hooked law once, fits it, and scores the truth,
// the fit and the hybrid on the same sample.
RidgeReport ridge_demo(double true_alpha, double true_B, std::size_t n,
                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Mixed preferential/random attachment
// ---------------------------------------------------------------------------

// beta: probability that a citation follows the rich-get-richer rule;
// m: references per new paper. m is real so the inverse mapping is exact.
struct AttachmentParams {
  double beta;
  double m;
};

// alpha = 1 + 1/beta, B = 2 m (1 - beta) / beta.
HookedPowerLawParams attachment_to_hooked(const AttachmentParams& p);
// beta = 1 / (alpha - 1), m = B beta / (2 (1 - beta)). Requires alpha > 2
// (beta < 1) and B >= 0; throws ParameterError otherwise.
AttachmentParams hooked_to_attachment(const HookedPowerLawParams& h);

// Stationary probability that a paper has k citations,
//   [2m(1-beta)]^(1/beta) [beta k + 2m(1-beta)]^(-1-1/beta).
double attachment_probability(const AttachmentParams& p, double k);

// Citation count above which the log-log slope of the hooked law is within
// relative tolerance T of -alpha: ((1 - T) / T) B.
double slope_tolerance_threshold(double T, double B);
// Slope d ln y / d ln x of y = A / (B + x)^alpha at x.
double log_log_slope(double alpha, double B, double x);

}  // namespace hookfit
