#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "hookfit/errors.hpp"
#include "hookfit/fitting.hpp"
#include "hookfit/objective.hpp"
#include "hookfit/rng.hpp"

using namespace hookfit;

namespace {

TruncatedView draw(const DistributionSpec& spec, std::size_t n, std::uint64_t seed,
                   Count x_min = 1) {
  return TruncatedView(sample(DiscreteDistribution(spec, x_min), n, seed), x_min);
}

// Central-difference gradient norm of -LL at the fitted parameters.
double numeric_gradient_norm(const FitResult& f, const TruncatedView& data) {
  const auto p = parameter_values(f.dist.spec());
  double sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(p[i]));
    auto up = p, down = p;
    up[i] += h;
    down[i] -= h;
    const double g = (neg_log_likelihood(make_spec(f.kind(), {up[0], up[1]}), data) -
                      neg_log_likelihood(make_spec(f.kind(), {down[0], down[1]}), data)) /
                     (2 * h);
    sq += g * g;
  }
  return std::sqrt(sq);
}

bool at_bound(const FitResult& f) {
  const auto p = parameter_values(f.dist.spec());
  if (f.kind() == Kind::hooked) {
    return p[0] <= ParameterBox::alpha_min || p[0] >= ParameterBox::alpha_max ||
           p[1] <= ParameterBox::B_min || p[1] >= ParameterBox::B_max;
  }
  return p[0] <= ParameterBox::mu_min || p[1] <= ParameterBox::sigma_min ||
         p[1] >= ParameterBox::sigma_max;
}

}  // namespace

TEST_CASE("power law fit recovers alpha") {
  const auto data = draw(PowerLawParams{2.5}, 4000, 1);
  const auto f = fit_power_law(data);
  CHECK(f.converged);
  // 90% interval half-width at n = 4000 is about 0.04.
  CHECK(std::get<PowerLawParams>(f.dist.spec()).alpha == doctest::Approx(2.5).epsilon(0.03));
  CHECK(f.n_tail == 4000);
  CHECK(f.x_min == 1);
}

TEST_CASE("power law fit solves the score equation") {
  // At the optimum, mean ln x equals the model expectation of ln x.
  const auto data = draw(PowerLawParams{1.9}, 3000, 2, 3);
  const auto f = fit_power_law(data);
  const double alpha = std::get<PowerLawParams>(f.dist.spec()).alpha;
  const DiscreteDistribution d(PowerLawParams{alpha}, 3);
  double expected = 0.0;
  for (Count x = 3; x < 3 + 2'000'000; ++x) expected += d.pmf(x) * std::log(x);
  double observed = 0.0;
  for (const Count x : data.retained()) observed += std::log(x);
  observed /= static_cast<double>(data.n_tail());
  // Truncating the expectation at two million terms costs about 1e-4.
  CHECK(observed == doctest::Approx(expected).epsilon(2e-4));
}

TEST_CASE("reported likelihood equals recomputation") {
  const auto data = draw(LognormalParams{2.0, 1.1}, 1500, 3);
  for (const Kind kind : {Kind::power_law, Kind::lognormal, Kind::hooked}) {
    const auto f = fit(kind, data);
    double direct = 0.0;
    for (const Count x : data.retained()) direct -= f.dist.log_pmf(x);
    CHECK(std::abs(f.neg_log_likelihood - direct) <= 1e-8 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("hooked and lognormal optima pass the gradient check") {
  const std::vector<DistributionSpec> generators{
      HookedPowerLawParams{3.0, 10.0}, HookedPowerLawParams{2.2, 1.0},
      LognormalParams{2.3, 1.2}, LognormalParams{0.5, 1.5}, PowerLawParams{2.1}};
  std::uint64_t seed = 10;
  for (const auto& g : generators) {
    const auto data = draw(g, 1000, seed++);
    for (const Kind kind : {Kind::hooked, Kind::lognormal}) {
      const auto f = fit(kind, data);
      CAPTURE(seed);
      CAPTURE(static_cast<int>(kind));
      if (f.converged) {
        CHECK(f.gradient_norm_at_exit <
              (kind == Kind::hooked ? FitTolerances::hooked_gradient
                                    : FitTolerances::lognormal_gradient));
      }
      if (!at_bound(f)) {
        CHECK(numeric_gradient_norm(f, data) <
              1e-4 * std::max(1.0, std::abs(f.neg_log_likelihood)));
      }
    }
  }
}

TEST_CASE("hooked fit is never worse than the power law") {
  for (std::uint64_t r = 0; r < 12; ++r) {
    const DistributionSpec g = r % 3 == 0   ? DistributionSpec{PowerLawParams{2.4}}
                               : r % 3 == 1 ? DistributionSpec{HookedPowerLawParams{4.0, 25.0}}
                                            : DistributionSpec{LognormalParams{1.8, 1.0}};
    const auto data = draw(g, 600, 100 + r, 1 + static_cast<Count>(r % 4));
    const auto pl = fit_power_law(data);
    const auto h = fit_hooked(data);
    CHECK(h.neg_log_likelihood <= pl.neg_log_likelihood + 1e-6);
  }
}

TEST_CASE("fits score at least as well as the generating parameters") {
  for (std::uint64_t r = 0; r < 6; ++r) {
    const LognormalParams ln{2.0, 1.0};
    const auto a = draw(ln, 800, 200 + r);
    CHECK(fit_lognormal(a).neg_log_likelihood <= neg_log_likelihood(ln, a) + 1e-6);
    const HookedPowerLawParams h{3.0, 2.0};
    const auto b = draw(h, 500, 300 + r);
    CHECK(fit_hooked(b).neg_log_likelihood <= neg_log_likelihood(h, b) + 1e-6);
  }
}

TEST_CASE("lognormal fit recovers its parameters") {
  const auto data = draw(LognormalParams{2.0, 1.0}, 4000, 4);
  const auto f = fit_lognormal(data);
  CHECK(f.converged);
  const auto p = std::get<LognormalParams>(f.dist.spec());
  CHECK(std::abs(p.mu - 2.0) < 0.1);
  CHECK(std::abs(p.sigma - 1.0) < 0.07);
}

TEST_CASE("fitting is deterministic") {
  const auto data = draw(HookedPowerLawParams{3.0, 10.0}, 700, 5);
  const auto a = fit_hooked(data);
  const auto b = fit_hooked(TruncatedView(data.retained(), 1));
  CHECK(parameter_values(a.dist.spec()) == parameter_values(b.dist.spec()));
  CHECK(a.neg_log_likelihood == b.neg_log_likelihood);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("degenerate data is rejected") {
  const TruncatedView same({4, 4, 4, 4}, 1);
  CHECK_THROWS_AS(fit_power_law(same), DegenerateDataError);
  CHECK_THROWS_AS(fit_lognormal(same), DegenerateDataError);
  CHECK_THROWS_AS(fit_hooked(same), DegenerateDataError);
  CHECK_THROWS_AS(fit_hooked(TruncatedView({1, 2}, 1)), DegenerateDataError);
  CHECK_NOTHROW(fit_power_law(TruncatedView({1, 2}, 1)));
}

TEST_CASE("x_min scan with a single candidate returns it") {
  const CountDataset d(draw(LognormalParams{2.0, 1.0}, 500, 6).retained());
  const std::vector<Count> one{3};
  const auto r = scan_x_min(d, Kind::power_law, one);
  CHECK(r.best_x_min == 3);
  REQUIRE(r.per_xmin.size() == 1);
  CHECK(r.best().fit.has_value());
}

TEST_CASE("x_min scan skips short tails and rejects all-short ranges") {
  const CountDataset d({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  const std::vector<Count> candidates{1, 2, 3, 4, 5};
  const auto r = scan_x_min(d, Kind::power_law, candidates);
  CHECK(r.per_xmin.size() == 3);
  const std::vector<Count> too_high{8, 9};
  CHECK_THROWS_AS(scan_x_min(d, Kind::power_law, too_high), DegenerateDataError);
  CHECK(default_x_min_candidates(d) == std::vector<Count>{1, 2, 3});
}

TEST_CASE("x_min scan picks the minimum score, smaller x_min on ties, any thread count") {
  const CountDataset d(draw(HookedPowerLawParams{2.5, 5.0}, 2000, 7).retained());
  std::vector<Count> candidates(40);
  std::iota(candidates.begin(), candidates.end(), 1);
  const auto a = scan_x_min(d, Kind::power_law, candidates, 1);
  const auto b = scan_x_min(d, Kind::power_law, candidates, 3);
  CHECK(a.best_x_min == b.best_x_min);
  REQUIRE(a.per_xmin.size() == b.per_xmin.size());
  for (std::size_t i = 0; i < a.per_xmin.size(); ++i) {
    CHECK(a.per_xmin[i].score == b.per_xmin[i].score);
    CHECK(a.per_xmin[i].score >= a.best().score);
    if (a.per_xmin[i].score == a.best().score) CHECK(a.per_xmin[i].x_min >= a.best_x_min);
  }
}

TEST_CASE("pure power-law data needs no truncation") {
  int at_one = 0;
  std::vector<Count> candidates(15);
  std::iota(candidates.begin(), candidates.end(), 1);
  for (std::uint64_t r = 0; r < 25; ++r) {
    const CountDataset d(draw(PowerLawParams{2.5}, 2000, derive_seed(8, 0, r)).retained());
    at_one += scan_x_min(d, Kind::power_law, candidates).best_x_min == 1 ? 1 : 0;
  }
  CHECK(at_one > 12);
}

TEST_CASE("a lognormal body spliced onto a power-law tail is cut near the splice") {
  int near = 0;
  std::vector<Count> candidates(150);
  std::iota(candidates.begin(), candidates.end(), 1);
  const DiscreteDistribution body(LognormalParams{2.0, 1.0}, 1);
  const DiscreteDistribution tail(PowerLawParams{2.5}, 50);
  for (std::uint64_t r = 0; r < 15; ++r) {
    std::vector<Count> counts;
    for (const Count x : sample(body, 12000, derive_seed(9, 0, r))) {
      if (x < 50 && counts.size() < 4000) counts.push_back(x);
    }
    const auto t = sample(tail, 1000, derive_seed(9, 1, r));
    counts.insert(counts.end(), t.begin(), t.end());
    const auto best = scan_x_min(CountDataset(counts), Kind::power_law, candidates).best_x_min;
    near += best >= 30 && best <= 80 ? 1 : 0;
  }
  CHECK(near > 7);
}
