#include "hookfit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hookfit/errors.hpp"
#include "numeric_detail.hpp"

namespace hookfit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void fill_window_log_weights(const DistributionSpec& spec, Count x_min,
                             std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(kWindowTerms));
  std::visit(
      Overloaded{
          [&](const PowerLawParams& p) {
            for (Count i = 0; i < kWindowTerms; ++i) {
              out[i] = -p.alpha * detail::log_count(x_min + i);
            }
          },
          [&](const HookedPowerLawParams& p) {
            if (p.B == 0.0) {
              for (Count i = 0; i < kWindowTerms; ++i) {
                out[i] = -p.alpha * detail::log_count(x_min + i);
              }
              return;
            }
            for (Count i = 0; i < kWindowTerms; ++i) {
              out[i] = -p.alpha * std::log(p.B + static_cast<double>(x_min + i));
            }
          },
          [&](const LognormalParams& p) {
            const double base = -std::log(p.sigma) - detail::kLogSqrtTwoPi;
            const double inv2s2 = 0.5 / (p.sigma * p.sigma);
            for (Count i = 0; i < kWindowTerms; ++i) {
              const double lx = detail::log_count(x_min + i);
              const double d = lx - p.mu;
              out[i] = base - lx - d * d * inv2s2;
            }
          },
      },
      spec);
}

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

Kind kind_of(const DistributionSpec& spec) noexcept {
  return static_cast<Kind>(spec.index());
}

int parameter_count(Kind kind) noexcept {
  return kind == Kind::power_law ? 1 : 2;
}

std::string_view short_name(Kind kind) noexcept {
  switch (kind) {
    case Kind::power_law:
      return "pl";
    case Kind::hooked:
      return "hooked";
    case Kind::lognormal:
      return "ln";
  }
  return "?";
}

Kind parse_kind(std::string_view name) {
  if (name == "pl" || name == "power_law" || name == "powerlaw") {
    return Kind::power_law;
  }
  if (name == "hooked" || name == "hpl") return Kind::hooked;
  if (name == "ln" || name == "lognormal") return Kind::lognormal;
  throw UsageError("unknown distribution '" + std::string(name) +
                   "' (expected pl|hooked|ln)");
}

std::vector<double> parameter_values(const DistributionSpec& spec) {
  return std::visit(
      Overloaded{
          [](const PowerLawParams& p) { return std::vector<double>{p.alpha}; },
          [](const HookedPowerLawParams& p) {
            return std::vector<double>{p.alpha, p.B};
          },
          [](const LognormalParams& p) {
            return std::vector<double>{p.mu, p.sigma};
          },
      },
      spec);
}

std::vector<std::string> parameter_names(Kind kind) {
  switch (kind) {
    case Kind::power_law:
      return {"alpha"};
    case Kind::hooked:
      return {"alpha", "B"};
    case Kind::lognormal:
      return {"mu", "sigma"};
  }
  return {};
}

DistributionSpec make_spec(Kind kind, std::array<double, 2> values) {
  switch (kind) {
    case Kind::power_law:
      return PowerLawParams{values[0]};
    case Kind::hooked:
      return HookedPowerLawParams{values[0], values[1]};
    case Kind::lognormal:
      return LognormalParams{values[0], values[1]};
  }
  throw UsageError("unknown distribution kind");
}

void validate(const DistributionSpec& spec, Count x_min) {
  if (x_min < 1) {
    throw ParameterError("x_min must be >= 1, got " + std::to_string(x_min));
  }
  std::visit(
      Overloaded{
          [](const PowerLawParams& p) {
            if (!std::isfinite(p.alpha) || p.alpha <= 1.0) {
              throw ParameterError("power law needs alpha > 1, got " +
                                   fmt(p.alpha));
            }
          },
          [x_min](const HookedPowerLawParams& p) {
            if (!std::isfinite(p.alpha) || p.alpha <= 1.0) {
              throw ParameterError("hooked power law needs alpha > 1, got " +
                                   fmt(p.alpha));
            }
            if (!std::isfinite(p.B) || p.B <= -1.0 ||
                p.B + static_cast<double>(x_min) <= 0.0) {
              throw ParameterError("hooked power law needs B > -1, got " +
                                   fmt(p.B));
            }
          },
          [](const LognormalParams& p) {
            if (!std::isfinite(p.mu)) {
              throw ParameterError("lognormal mu must be finite");
            }
            if (!std::isfinite(p.sigma) || p.sigma <= 0.0) {
              throw ParameterError("lognormal needs sigma > 0, got " +
                                   fmt(p.sigma));
            }
          },
      },
      spec);
}

double log_weight(const DistributionSpec& spec, double x) {
  return std::visit(
      Overloaded{
          [x](const PowerLawParams& p) { return -p.alpha * std::log(x); },
          [x](const HookedPowerLawParams& p) {
            return -p.alpha * std::log(p.B + x);
          },
          [x](const LognormalParams& p) {
            const double lx = std::log(x);
            const double d = (lx - p.mu) / p.sigma;
            return -lx - std::log(p.sigma) - detail::kLogSqrtTwoPi - 0.5 * d * d;
          },
      },
      spec);
}

double unnormalized_weight(const DistributionSpec& spec, Count x) {
  if (x < 1) throw SupportError("kernels are defined for x >= 1");
  validate(spec, 1);
  return std::exp(log_weight(spec, static_cast<double>(x)));
}

double log_tail_integral(const DistributionSpec& spec, double from) {
  return std::visit(
      Overloaded{
          [from](const PowerLawParams& p) {
            return (1.0 - p.alpha) * std::log(from) - std::log(p.alpha - 1.0);
          },
          [from](const HookedPowerLawParams& p) {
            return (1.0 - p.alpha) * std::log(p.B + from) -
                   std::log(p.alpha - 1.0);
          },
          [from](const LognormalParams& p) {
            return detail::log_normal_upper_tail((std::log(from) - p.mu) /
                                                 p.sigma);
          },
      },
      spec);
}

double Normalizer::log_value() const noexcept {
  return log_sum_exp(log_window, log_tail);
}
double Normalizer::value() const noexcept { return std::exp(log_value()); }
double Normalizer::bare() const noexcept { return std::exp(log_window); }

Normalizer normalizer(const DistributionSpec& spec, Count x_min) {
  validate(spec, x_min);
  thread_local std::vector<double> terms;
  fill_window_log_weights(spec, x_min, terms);
  const double m = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (const double t : terms) sum += std::exp(t - m);
  return Normalizer{
      m + std::log(sum),
      log_tail_integral(spec, static_cast<double>(x_min + kWindowTerms) - 0.5)};
}

double normalization_constant(const DistributionSpec& spec, Count x_min) {
  const Normalizer n = normalizer(spec, x_min);
  const double v = n.value();
  if (!std::isfinite(v) || v <= 0.0) {
    throw ParameterError("normalizing constant is not representable");
  }
  return v;
}

DiscreteDistribution::DiscreteDistribution(DistributionSpec spec, Count x_min)
    : spec_(spec),
      x_min_(x_min),
      norm_(hookfit::normalizer(spec, x_min)),
      log_norm_(norm_.log_value()) {}

double DiscreteDistribution::log_pmf(Count x) const {
  if (x < x_min_) {
    throw SupportError("x = " + std::to_string(x) + " is below x_min = " +
                       std::to_string(x_min_));
  }
  return log_weight(spec_, static_cast<double>(x)) - log_norm_;
}

double DiscreteDistribution::pmf(Count x) const { return std::exp(log_pmf(x)); }

double DiscreteDistribution::ccdf(Count x) const {
  if (x < x_min_) {
    throw SupportError("x = " + std::to_string(x) + " is below x_min = " +
                       std::to_string(x_min_));
  }
  if (x == x_min_) return 1.0;
  const Count window_end = x_min_ + kWindowTerms;
  const double tail =
      std::exp(norm_.log_tail - log_norm_);
  if (x >= window_end) {
    return std::exp(log_tail_integral(spec_, static_cast<double>(x) - 0.5) -
                    log_norm_);
  }
  // Sum upward from x so small tail probabilities keep full precision.
  double sum = 0.0;
  for (Count y = window_end - 1; y >= x; --y) {
    sum += std::exp(log_weight(spec_, static_cast<double>(y)) - log_norm_);
  }
  return std::min(1.0, sum + tail);
}

Sampler::Sampler(DiscreteDistribution dist) : dist_(std::move(dist)) {}

void Sampler::extend(double u) {
  constexpr std::size_t kChunk = 1024;
  const Count x_min = dist_.x_min();
  const double log_norm = dist_.log_norm();
  double cum = cumulative_.empty() ? 0.0 : cumulative_.back();
  while (cum < u && !capped_ && cumulative_.size() < kMaxTable) {
    const std::size_t stop = std::min(cumulative_.size() + kChunk, kMaxTable);
    for (std::size_t i = cumulative_.size(); i < stop; ++i) {
      const Count x = x_min + static_cast<Count>(i);
      cum += std::exp(log_weight(dist_.spec(), static_cast<double>(x)) -
                      log_norm);
      cumulative_.push_back(cum);
      if (cum >= kMassCap) {
        capped_ = true;
        break;
      }
    }
  }
}

Count Sampler::tail_draw(double u) {
  const double tabulated = cumulative_.back();
  const Count last = dist_.x_min() + static_cast<Count>(cumulative_.size()) - 1;
  const double from = static_cast<double>(last) + 0.5;
  // Fraction of the untabulated mass that lies beyond the drawn point.
  const double beyond = std::clamp((1.0 - u) / (1.0 - tabulated), 1e-300, 1.0);
  const double log_target = log_tail_integral(dist_.spec(), from) + std::log(beyond);

  double point = 0.0;
  if (const auto* ln = std::get_if<LognormalParams>(&dist_.spec())) {
    double lo = (std::log(from) - ln->mu) / ln->sigma;
    double hi = lo + 1.0;
    while (detail::log_normal_upper_tail(hi) > log_target && hi < lo + 1e3) {
      hi = lo + 2.0 * (hi - lo);
    }
    for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi));
         ++i) {
      const double mid = 0.5 * (lo + hi);
      (detail::log_normal_upper_tail(mid) > log_target ? lo : hi) = mid;
    }
    point = std::exp(ln->mu + ln->sigma * 0.5 * (lo + hi));
  } else {
    const auto& spec = dist_.spec();
    const double alpha = std::holds_alternative<PowerLawParams>(spec)
                             ? std::get<PowerLawParams>(spec).alpha
                             : std::get<HookedPowerLawParams>(spec).alpha;
    const double B = std::holds_alternative<PowerLawParams>(spec)
                         ? 0.0
                         : std::get<HookedPowerLawParams>(spec).B;
    point = std::exp(std::log(B + from) + std::log(beyond) / (1.0 - alpha)) - B;
  }
  constexpr double kLargest = 4.0e18;
  if (!(point < kLargest)) return static_cast<Count>(kLargest);
  return std::max(last + 1, static_cast<Count>(std::floor(point + 0.5)));
}

Count Sampler::operator()(Rng& rng) {
  const double u = rng.uniform();
  if (cumulative_.empty() || u > cumulative_.back()) extend(u);
  if (u <= cumulative_.back()) {
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    return dist_.x_min() + static_cast<Count>(it - cumulative_.begin());
  }
  if (capped_) {
    return dist_.x_min() + static_cast<Count>(cumulative_.size()) - 1;
  }
  return tail_draw(u);
}

std::vector<Count> Sampler::draw(std::size_t n, Rng& rng) {
  std::vector<Count> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back((*this)(rng));
  return out;
}

std::vector<Count> sample(const DiscreteDistribution& dist, std::size_t n,
                          std::uint64_t seed) {
  if (n == 0) throw ParameterError("sample size must be >= 1");
  Sampler sampler(dist);
  Rng rng(seed);
  return sampler.draw(n, rng);
}

}  // namespace hookfit
