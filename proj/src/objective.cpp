#include "hookfit/objective.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "numeric_detail.hpp"

namespace hookfit {

namespace {

// Accumulates p * (g, H + g g^T) for one log-term with weight p.
struct MomentSums {
  double s0 = 0.0, s0c = 0.0;
  double a = 0.0, b = 0.0;
  double aa = 0.0, ab = 0.0, bb = 0.0;

  void add_mass(double p) {
    // Kahan-compensated mass; the derivative sums need less care.
    const double y = p - s0c;
    const double t = s0 + y;
    s0c = (t - s0) - y;
    s0 = t;
  }

  void add(double p, double ga, double gb, double h00, double h01, double h11) {
    add_mass(p);
    a += p * ga;
    b += p * gb;
    aa += p * (h00 + ga * ga);
    ab += p * (h01 + ga * gb);
    bb += p * (h11 + gb * gb);
  }

  Derivatives finish(double shift) const {
    Derivatives d;
    d.value = shift + std::log(s0);
    const double ga = a / s0;
    const double gb = b / s0;
    d.gradient = {ga, gb};
    d.hessian = {aa / s0 - ga * ga, ab / s0 - ga * gb, bb / s0 - gb * gb};
    return d;
  }
};

template <bool kDerivs>
Derivatives hooked_log_normalizer(double alpha, double B, Count x_min) {
  thread_local std::vector<double> log_base;
  log_base.resize(static_cast<std::size_t>(kWindowTerms));
  for (Count i = 0; i < kWindowTerms; ++i) {
    log_base[i] = B == 0.0 ? detail::log_count(x_min + i)
                           : std::log(B + static_cast<double>(x_min + i));
  }
  const double tail_from = static_cast<double>(x_min + kWindowTerms) - 0.5;
  const double tail_log_base = std::log(B + tail_from);
  const double tail_term = (1.0 - alpha) * tail_log_base - std::log(alpha - 1.0);
  // Kernel is decreasing, so the first window term is the largest.
  const double shift = std::max(-alpha * log_base[0], tail_term);

  MomentSums sums;
  for (Count i = 0; i < kWindowTerms; ++i) {
    const double l = log_base[i];
    const double p = std::exp(-alpha * l - shift);
    if constexpr (kDerivs) {
      const double inv = 1.0 / (B + static_cast<double>(x_min + i));
      sums.add(p, -l, -alpha * inv, 0.0, -inv, alpha * inv * inv);
    } else {
      sums.add_mass(p);
    }
  }
  if constexpr (!kDerivs) {
    sums.add_mass(std::exp(tail_term - shift));
    return sums.finish(shift);
  }
  const double am1 = alpha - 1.0;
  const double inv_t = 1.0 / (B + tail_from);
  sums.add(std::exp(tail_term - shift), -tail_log_base - 1.0 / am1,
           -am1 * inv_t, 1.0 / (am1 * am1), -inv_t, am1 * inv_t * inv_t);
  return sums.finish(shift);
}

template <bool kDerivs>
Derivatives lognormal_log_normalizer(double mu, double sigma, Count x_min) {
  thread_local std::vector<double> terms;
  terms.resize(static_cast<std::size_t>(kWindowTerms));
  const double s2 = sigma * sigma;
  const double base = -std::log(sigma) - detail::kLogSqrtTwoPi;
  for (Count i = 0; i < kWindowTerms; ++i) {
    const double lx = detail::log_count(x_min + i);
    const double d = lx - mu;
    terms[i] = base - lx - 0.5 * d * d / s2;
  }
  const double tail_from = static_cast<double>(x_min + kWindowTerms) - 0.5;
  const double z = (std::log(tail_from) - mu) / sigma;
  const double tail_term = detail::log_normal_upper_tail(z);
  const double shift =
      std::max(*std::max_element(terms.begin(), terms.end()), tail_term);

  const double s3 = s2 * sigma;
  const double s4 = s2 * s2;
  MomentSums sums;
  if constexpr (!kDerivs) {
    for (const double t : terms) sums.add_mass(std::exp(t - shift));
    sums.add_mass(std::exp(tail_term - shift));
    return sums.finish(shift);
  }
  for (Count i = 0; i < kWindowTerms; ++i) {
    const double d = detail::log_count(x_min + i) - mu;
    const double p = std::exp(terms[i] - shift);
    sums.add(p, d / s2, -1.0 / sigma + d * d / s3, -1.0 / s2, -2.0 * d / s3,
             1.0 / s2 - 3.0 * d * d / s4);
  }
  const double h = detail::inverse_mills(z);
  const double hz = h * (h - z);
  sums.add(std::exp(tail_term - shift), h / sigma, h * z / sigma, -hz / s2,
           -(hz * z + h) / s2, -z * h * ((h - z) * z + 1.0) / s2 - h * z / s2);
  return sums.finish(shift);
}

template <bool kDerivs>
Derivatives log_normalizer_impl(const DistributionSpec& spec, Count x_min) {
  validate(spec, x_min);
  if (const auto* p = std::get_if<PowerLawParams>(&spec)) {
    Derivatives d = hooked_log_normalizer<kDerivs>(p->alpha, 0.0, x_min);
    d.gradient[1] = 0.0;
    d.hessian[1] = d.hessian[2] = 0.0;
    return d;
  }
  if (const auto* p = std::get_if<HookedPowerLawParams>(&spec)) {
    return hooked_log_normalizer<kDerivs>(p->alpha, p->B, x_min);
  }
  const auto& p = std::get<LognormalParams>(spec);
  return lognormal_log_normalizer<kDerivs>(p.mu, p.sigma, x_min);
}

}  // namespace

Derivatives log_normalizer_derivatives(const DistributionSpec& spec,
                                       Count x_min) {
  return log_normalizer_impl<true>(spec, x_min);
}

double neg_log_likelihood(const DistributionSpec& spec,
                          const TruncatedView& view) {
  const double log_norm = normalizer(spec, view.x_min()).log_value();
  double data = 0.0;
  for (const auto& [x, c] : view.histogram()) {
    data += static_cast<double>(c) * log_weight(spec, static_cast<double>(x));
  }
  return static_cast<double>(view.n_tail()) * log_norm - data;
}

Derivatives neg_log_likelihood_derivatives(const DistributionSpec& spec,
                                           const TruncatedView& view,
                                           bool with_derivatives) {
  const Derivatives norm =
      with_derivatives ? log_normalizer_impl<true>(spec, view.x_min())
                       : log_normalizer_impl<false>(spec, view.x_min());
  const double n = static_cast<double>(view.n_tail());

  Derivatives data;
  if (const auto* ln = std::get_if<LognormalParams>(&spec)) {
    const double s = ln->sigma;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double s4 = s2 * s2;
    const double base = -std::log(s) - detail::kLogSqrtTwoPi;
    for (const auto& [x, count] : view.histogram()) {
      const double c = static_cast<double>(count);
      const double lx = std::log(static_cast<double>(x));
      const double d = lx - ln->mu;
      data.value += c * (base - lx - 0.5 * d * d / s2);
      data.gradient[0] += c * d / s2;
      data.gradient[1] += c * (-1.0 / s + d * d / s3);
      data.hessian[0] += c * (-1.0 / s2);
      data.hessian[1] += c * (-2.0 * d / s3);
      data.hessian[2] += c * (1.0 / s2 - 3.0 * d * d / s4);
    }
  } else {
    const bool hooked = std::holds_alternative<HookedPowerLawParams>(spec);
    const double alpha = hooked ? std::get<HookedPowerLawParams>(spec).alpha
                                : std::get<PowerLawParams>(spec).alpha;
    const double B = hooked ? std::get<HookedPowerLawParams>(spec).B : 0.0;
    for (const auto& [x, count] : view.histogram()) {
      const double c = static_cast<double>(count);
      const double l = std::log(B + static_cast<double>(x));
      const double inv = 1.0 / (B + static_cast<double>(x));
      data.value += c * (-alpha * l);
      data.gradient[0] += c * (-l);
      if (hooked) {
        data.gradient[1] += c * (-alpha * inv);
        data.hessian[1] += c * (-inv);
        data.hessian[2] += c * (alpha * inv * inv);
      }
    }
  }

  Derivatives out;
  out.value = n * norm.value - data.value;
  for (int i = 0; i < 2; ++i) {
    out.gradient[i] = n * norm.gradient[i] - data.gradient[i];
  }
  for (int i = 0; i < 3; ++i) {
    out.hessian[i] = n * norm.hessian[i] - data.hessian[i];
  }
  return out;
}

}  // namespace hookfit
