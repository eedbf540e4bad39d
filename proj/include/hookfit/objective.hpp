#pragma once

#include <array>

#include "hookfit/dataset.hpp"
#include "hookfit/kernels.hpp"

namespace hookfit {

// A scalar with first and second derivatives with respect to the natural
// parameters of its distribution: (alpha), (alpha, B) or (mu, sigma). For the
// one-parameter power law only gradient[0] and hessian[0] are meaningful.
struct Derivatives {
  double value = 0.0;
  std::array<double, 2> gradient{};
  std::array<double, 3> hessian{};  // (0,0), (0,1), (1,1)
};

// log of the normalizing constant, tail correction included.
Derivatives log_normalizer_derivatives(const DistributionSpec& spec, Count x_min);

// Negative log-likelihood of the view's data, truncated at view.x_min().
double neg_log_likelihood(const DistributionSpec& spec, const TruncatedView& view);
// With `with_derivatives` false only `value` is filled; it is bitwise equal
// to the value of the full evaluation.
Derivatives neg_log_likelihood_derivatives(const DistributionSpec& spec,
                                           const TruncatedView& view,
                                           bool with_derivatives = true);

}  // namespace hookfit
