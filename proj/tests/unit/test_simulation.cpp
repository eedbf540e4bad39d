#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hookfit/errors.hpp"
#include "hookfit/objective.hpp"
#include "hookfit/simulation.hpp"

using namespace hookfit;

TEST_CASE("attachment mapping examples") {
  const auto a = attachment_to_hooked({0.5, 1.0});
  CHECK(a.alpha == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(a.B == doctest::Approx(2.0).epsilon(1e-14));
  const auto b = attachment_to_hooked({0.25, 3.0});
  CHECK(b.alpha == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(b.B == doctest::Approx(18.0).epsilon(1e-14));

  const auto back = hooked_to_attachment({3.0, 2.0});
  CHECK(back.beta == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(back.m == doctest::Approx(1.0).epsilon(1e-14));
  const auto back2 = hooked_to_attachment({5.0, 18.0});
  CHECK(back2.beta == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(back2.m == doctest::Approx(3.0).epsilon(1e-14));

  CHECK_THROWS_AS(hooked_to_attachment({2.0, 5.0}), ParameterError);
  CHECK_THROWS_AS(hooked_to_attachment({3.0, -0.5}), ParameterError);
  CHECK_THROWS_AS(attachment_to_hooked({1.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(attachment_to_hooked({0.0, 1.0}), ParameterError);
}

TEST_CASE("attachment round trip and pmf proportionality") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> alpha_dist(2.05, 15.0);
  std::uniform_real_distribution<double> b_dist(0.0, 500.0);
  for (int i = 0; i < 200; ++i) {
    const HookedPowerLawParams h{alpha_dist(gen), b_dist(gen)};
    const auto again = attachment_to_hooked(hooked_to_attachment(h));
    CHECK(std::abs(again.alpha - h.alpha) <= 1e-12 * h.alpha);
    CHECK(std::abs(again.B - h.B) <= 1e-12 * std::max(1.0, h.B));
  }
  const AttachmentParams p{0.3, 4.0};
  const auto h = attachment_to_hooked(p);
  const double ref = attachment_probability(p, 1.0) / unnormalized_weight(h, 1);
  for (Count k = 1; k <= 100; ++k) {
    CHECK(attachment_probability(p, static_cast<double>(k)) / unnormalized_weight(h, k) ==
          doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("slope tolerance threshold") {
  CHECK(slope_tolerance_threshold(0.1, 55.0) == 495.0);
  CHECK(slope_tolerance_threshold(0.5, 37.25) == 37.25);
  const double x = slope_tolerance_threshold(0.1, 10.0);
  CHECK(x == doctest::Approx(90.0).epsilon(1e-14));
  // Y' = -alpha e^X / (B + e^X) with X = ln x.
  const double alpha = 3.7;
  const double y_prime = -alpha * std::exp(std::log(x)) / (10.0 + std::exp(std::log(x)));
  CHECK(std::abs(y_prime) / alpha == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(log_log_slope(alpha, 10.0, x) == doctest::Approx(y_prime).epsilon(1e-12));
  CHECK_THROWS_AS(slope_tolerance_threshold(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(slope_tolerance_threshold(1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(slope_tolerance_threshold(0.2, -1.0), ParameterError);
}

TEST_CASE("type-7 quantiles") {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  CHECK(sorted_quantile(v, 0.05) == doctest::Approx(1.5));
  CHECK(sorted_quantile(v, 0.95) == doctest::Approx(10.5));
  CHECK(sorted_quantile(v, 0.0) == 1.0);
  CHECK(sorted_quantile(v, 1.0) == 11.0);
  CHECK(std::isnan(sorted_quantile({}, 0.5)));
}

TEST_CASE("CI study is reproducible and thread-independent") {
  StudyOptions one{20, 42, 1};
  StudyOptions many{20, 42, 3};
  const auto a = ci_width_study(Kind::hooked, {2.0, 4.0}, {200, 800}, one);
  const auto b = ci_width_study(Kind::hooked, {2.0, 4.0}, {200, 800}, many);
  REQUIRE(a.cells.size() == 4);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].width == b.cells[i].width);
    CHECK(a.cells[i].lower == b.cells[i].lower);
    CHECK(a.cells[i].used + a.cells[i].excluded == 20);
    CHECK(a.cells[i].width >= 0.0);
  }
  CHECK(a.at(1, 0, 1).param1 == 4.0);
  CHECK(a.at(1, 0, 1).n == 800);
  CHECK(a.param2_axis == std::vector<double>{10.0});

  const auto pl = ci_width_study(Kind::power_law, {2.0, 3.0}, {300, 3000}, one);
  for (std::size_t i = 0; i < 2; ++i) CHECK(pl.at(i, 0, 1).width < pl.at(i, 0, 0).width);

  CHECK_THROWS_AS(ci_width_study(Kind::hooked, {2.0}, {200}, StudyOptions{1, 1, 1}),
                  ParameterError);
  CHECK_THROWS_AS(ci_width_study(Kind::hooked, {3.0, 2.0}, {200}, one), UsageError);
  CHECK_THROWS_AS(ci_width_study(Kind::lognormal, {2.0}, {200}, one), UsageError);
}

TEST_CASE("lognormal precision is best at high mu and low sigma") {
  const auto s = lognormal_ci_study({0.5, 2.7}, {1.0, 1.6}, {500}, StudyOptions{60, 7, 1});
  CHECK(s.mu.at(1, 0, 0).width < s.mu.at(0, 1, 0).width);
  CHECK(s.sigma.at(1, 0, 0).width < s.sigma.at(0, 1, 0).width);
  CHECK(s.mu.target == Target::mu);
  CHECK(s.sigma.target == Target::sigma);
}

TEST_CASE("contour grids") {
  const TruncatedView data(sample(DiscreteDistribution(LognormalParams{2.3, 1.2}, 1), 500, 3), 1);
  const auto single = ll_contour(data, Kind::lognormal, {2.0}, {1.1});
  CHECK(single.cells.size() == 1);
  CHECK(single.at(0, 0) == neg_log_likelihood(LognormalParams{2.0, 1.1}, data));

  std::vector<double> mu, sigma;
  for (int i = 0; i <= 20; ++i) mu.push_back(1.3 + 0.1 * i);
  for (int i = 0; i <= 10; ++i) sigma.push_back(0.7 + 0.1 * i);
  const auto grid = ll_contour(data, Kind::lognormal, mu, sigma);
  const auto [i, j] = grid.argmin();
  CHECK(std::abs(static_cast<int>(i) - 10) <= 1);
  CHECK(std::abs(static_cast<int>(j) - 5) <= 1);

  auto shuffled = data.retained();
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(ll_contour(TruncatedView(shuffled, 1), Kind::lognormal, mu, sigma).cells == grid.cells);

  const auto invalid = ll_contour(data, Kind::hooked, {2.0, 3.0}, {-2.0, 5.0});
  CHECK(invalid.valid == std::vector<std::uint8_t>{0, 1, 0, 1});
  CHECK(std::isnan(invalid.at(0, 0)));

  CHECK_THROWS_AS(ll_contour(data, Kind::power_law, {2.0}, {1.0}), UsageError);
  CHECK_THROWS_AS(ll_contour(data, Kind::lognormal, {2.0, 1.0}, {1.0}), UsageError);
}

TEST_CASE("hooked contour shows a rising ridge") {
  const TruncatedView data(
      sample(DiscreteDistribution(HookedPowerLawParams{3.0, 10.0}, 1), 2000, 4), 1);
  std::vector<double> alpha, B;
  for (int i = 0; i <= 30; ++i) alpha.push_back(2.0 + 0.1 * i);
  for (int i = 0; i <= 40; ++i) B.push_back(0.5 * i);
  const auto grid = ll_contour(data, Kind::hooked, alpha, B);
  const auto [bi, bj] = grid.argmin();
  const double best = grid.at(bi, bj);
  // Least-squares slope of B on alpha over the near-optimal cells.
  double sa = 0, sb = 0, saa = 0, sab = 0, n = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (std::size_t j = 0; j < B.size(); ++j) {
      if (grid.valid[i * B.size() + j] && grid.at(i, j) <= best + 2.0) {
        sa += alpha[i];
        sb += B[j];
        saa += alpha[i] * alpha[i];
        sab += alpha[i] * B[j];
        n += 1;
      }
    }
  }
  CHECK(n > 5);
  CHECK((n * sab - sa * sb) / (n * saa - sa * sa) > 0.0);
}

TEST_CASE("ridge demo") {
  const auto r = ridge_demo(3.0, 10.0, 500, 9);
  CHECK(r.fit_not_worse);
  CHECK(r.neg_ll_fitted <= r.neg_ll_true + 1e-6);
  CHECK(r.hybrid.alpha == r.fitted.alpha);
  CHECK(r.hybrid.B == 10.0);
  CHECK(r.n == 500);
  CHECK_THROWS_AS(ridge_demo(3.0, 10.0, 50, 9), ParameterError);
}
