#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hookfit/dataset.hpp"
#include "hookfit/rng.hpp"

namespace hookfit {

// p(x) proportional to x^-alpha.
struct PowerLawParams {
  double alpha;
};

// p(x) proportional to (B + x)^-alpha. B = 0 gives the power law.
struct HookedPowerLawParams {
  double alpha;
  double B;
};

// p(x) proportional to the lognormal density at integer x.
struct LognormalParams {
  double mu;
  double sigma;
};

using DistributionSpec =
    std::variant<PowerLawParams, HookedPowerLawParams, LognormalParams>;

enum class Kind { power_law, hooked, lognormal };

Kind kind_of(const DistributionSpec& spec) noexcept;
int parameter_count(Kind kind) noexcept;
std::string_view short_name(Kind kind) noexcept;  // "pl", "hooked", "ln"
Kind parse_kind(std::string_view name);

// Parameters in a fixed order: (alpha), (alpha, B) or (mu, sigma).
std::vector<double> parameter_values(const DistributionSpec& spec);
std::vector<std::string> parameter_names(Kind kind);
DistributionSpec make_spec(Kind kind, std::array<double, 2> values);

// Throws ParameterError unless the parameters define a proper distribution
// on {x_min, x_min + 1, ...}.
void validate(const DistributionSpec& spec, Count x_min);

// Number of explicitly summed terms in a normalizing constant.
inline constexpr Count kWindowTerms = 10'000;

// Kernel value x^-alpha, (B + x)^-alpha or the lognormal density at x.
double unnormalized_weight(const DistributionSpec& spec, Count x);
double log_weight(const DistributionSpec& spec, double x);

// log of the integral of the continuous kernel over [from, inf).
double log_tail_integral(const DistributionSpec& spec, double from);

// Normalizing constant split into the explicit sum over
// [x_min, x_min + kWindowTerms) and the integral correction over
// [x_min + kWindowTerms - 1/2, inf). Both are kept in log space.
struct Normalizer {
  double log_window;
  double log_tail;

  double log_value() const noexcept;
  double value() const noexcept;
  double bare() const noexcept;  // window sum without the tail correction
};

Normalizer normalizer(const DistributionSpec& spec, Count x_min);
double normalization_constant(const DistributionSpec& spec, Count x_min);

class DiscreteDistribution {
 public:
  DiscreteDistribution(DistributionSpec spec, Count x_min);

  const DistributionSpec& spec() const noexcept { return spec_; }
  Kind kind() const noexcept { return kind_of(spec_); }
  Count x_min() const noexcept { return x_min_; }
  const Normalizer& normalizer() const noexcept { return norm_; }
  double log_norm() const noexcept { return log_norm_; }

  double log_pmf(Count x) const;
  double pmf(Count x) const;
  // P(X >= x).
  double ccdf(Count x) const;

 private:
  DistributionSpec spec_;
  Count x_min_;
  Normalizer norm_;
  double log_norm_;
};

// Inverse-CDF sampler over a cumulative table that grows on demand. Growth
// stops once the tabulated mass reaches kMassCap (draws beyond it return the
// last tabulated value) or the table holds kMaxTable entries (draws beyond it
// invert the continuous tail integral and round to the nearest integer).
class Sampler {
 public:
  static constexpr double kMassCap = 1.0 - 1e-12;
  static constexpr std::size_t kMaxTable = std::size_t{1} << 22;

  explicit Sampler(DiscreteDistribution dist);

  Count operator()(Rng& rng);
  std::vector<Count> draw(std::size_t n, Rng& rng);

  const DiscreteDistribution& distribution() const noexcept { return dist_; }
  std::size_t table_size() const noexcept { return cumulative_.size(); }

 private:
  void extend(double u);
  Count tail_draw(double u);

  DiscreteDistribution dist_;
  std::vector<double> cumulative_;  // P(X <= x_min + i)
  bool capped_ = false;
};

std::vector<Count> sample(const DiscreteDistribution& dist, std::size_t n,
                          std::uint64_t seed);

}  // namespace hookfit
