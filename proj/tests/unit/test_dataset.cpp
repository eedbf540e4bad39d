#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hookfit/dataset.hpp"
#include "hookfit/errors.hpp"
#include "hookfit/kernels.hpp"

using namespace hookfit;

namespace {

CountDataset parse_plain(const std::string& text) {
  std::istringstream in(text);
  return parse_counts(in, InputFormat::plain, "test");
}

CountDataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_counts(in, InputFormat::csv, "test");
}

int parse_error_line(const std::string& text, InputFormat format) {
  std::istringstream in(text);
  try {
    parse_counts(in, format, "test");
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

}  // namespace

TEST_CASE("plain input drops zeros and keeps order") {
  const auto d = parse_plain("3\n0\n7");
  CHECK(d.counts() == std::vector<Count>{3, 7});
  CHECK(d.n() == 2);
  CHECK(d.zeros_dropped() == 1);

  const auto one = parse_plain("1\n");
  CHECK(one.counts() == std::vector<Count>{1});
  CHECK(one.zeros_dropped() == 0);
}

TEST_CASE("plain input rejects malformed lines with their line number") {
  CHECK(parse_error_line("-2", InputFormat::plain) == 1);
  CHECK(parse_error_line("4\n5\n2.5\n", InputFormat::plain) == 3);
  CHECK(parse_error_line("4\nabc\n", InputFormat::plain) == 2);
  CHECK(parse_error_line("4\n\n5\n", InputFormat::plain) == 2);
  CHECK_THROWS_AS(parse_plain("0\n0\n"), EmptyDataError);
  CHECK_THROWS_AS(parse_plain(""), EmptyDataError);
}

TEST_CASE("csv input reads the citations column") {
  const auto d = parse_csv("id,citations,title\n1,4,\"a, b\"\n2,0,x\r\n3,9,\"say \"\"hi\"\"\"\n");
  CHECK(d.counts() == std::vector<Count>{4, 9});
  CHECK(d.zeros_dropped() == 1);
  CHECK(parse_error_line("id,cites\n1,2\n", InputFormat::csv) == 1);
  CHECK(parse_error_line("citations\n3\n-1\n", InputFormat::csv) == 3);
}

TEST_CASE("error exit codes follow the taxonomy") {
  CHECK(ParseError(1, "x").exit_code() == ExitCode::io);
  CHECK(EmptyDataError("x").exit_code() == ExitCode::io);
  CHECK(EmptyTailError("x").exit_code() == ExitCode::degenerate);
  CHECK(ParameterError("x").exit_code() == ExitCode::usage);
  CHECK(ConsistencyError("x").exit_code() == ExitCode::internal);
  CHECK_THROWS_AS(load_counts("/nonexistent/file.txt", InputFormat::plain), IoError);
}

TEST_CASE("truncate keeps counts at or above x_min") {
  const CountDataset d({1, 2, 5, 5, 9});
  const auto t = truncate(d, 5);
  CHECK(t.retained() == std::vector<Count>{5, 5, 9});
  CHECK(t.n_tail() == 3);
  CHECK(t.distinct_values() == 2);
  CHECK(t.histogram()[0].multiplicity == 2);

  const CountDataset small({1, 2, 3});
  CHECK(truncate(small, 1).retained() == small.counts());
  CHECK_THROWS_AS(truncate(CountDataset({1, 2}), 10), EmptyTailError);
  CHECK_THROWS_AS(truncate(small, 0), ParameterError);
  CHECK_THROWS_AS(CountDataset({0, 3}), ParameterError);
}

TEST_CASE("repeated truncation equals truncation at the larger threshold") {
  const CountDataset d({1, 3, 3, 4, 8, 12, 12, 30});
  for (Count a = 1; a <= 12; ++a) {
    for (Count b = 1; b <= 12; ++b) {
      CHECK(truncate(truncate(d, a), b).retained() ==
            truncate(d, std::max(a, b)).retained());
    }
  }
}

TEST_CASE("tail_ccdf examples") {
  const auto c = tail_ccdf(TruncatedView({2, 2, 4}, 1));
  REQUIRE(c.size() == 2);
  CHECK(c[0].value == 2);
  CHECK(c[0].probability == 1.0);
  CHECK(c[1].value == 4);
  CHECK(c[1].probability == doctest::Approx(1.0 / 3.0));

  const auto single = tail_ccdf(TruncatedView({7}, 7));
  REQUIRE(single.size() == 1);
  CHECK(single[0].probability == 1.0);
}

TEST_CASE("empirical ccdf stays inside the DKW band of the model") {
  // P(sup |F_n - F| > eps) <= 2 exp(-2 n eps^2); eps for 99%.
  const std::size_t n = 1000;
  const double eps = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
  const DiscreteDistribution dist(HookedPowerLawParams{2.8, 6.0}, 1);
  const TruncatedView view(sample(dist, n, 99), 1);
  const auto ccdf = tail_ccdf(view);
  double prev = 2.0;
  for (const auto& p : ccdf) {
    CHECK(p.probability <= prev);
    CHECK(p.probability > 0.0);
    prev = p.probability;
    CHECK(std::abs(p.probability - dist.ccdf(p.value)) <= eps);
  }
}
