#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "hookfit/analysis.hpp"
#include "hookfit/errors.hpp"
#include "hookfit/rng.hpp"
#include "hookfit/serialize.hpp"

using namespace hookfit;

namespace {

CountDataset draw(const DistributionSpec& spec, std::size_t n, std::uint64_t seed,
                  std::string label) {
  return CountDataset(sample(DiscreteDistribution(spec, 1), n, seed), std::move(label));
}

void check_field(const std::string& field, const std::optional<double>& value) {
  if (!value) {
    CHECK(field.empty());
  } else {
    CHECK(parse_number(field) == *value);
  }
}

}  // namespace

TEST_CASE("numbers round-trip through their shortest text") {
  for (const double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -1e-300}) {
    CHECK(parse_number(format_number(v)) == v);
  }
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()).empty());
  CHECK(std::isnan(parse_number("")));
  CHECK(format_number(495.0) == "495");
  CHECK_THROWS(parse_number("12abc"));
}

TEST_CASE("CSV tables round-trip with quoting") {
  CsvTable t{{"name", "value"}, {{"plain", "1"}, {"with,comma", "2"}, {"say \"hi\"", "3"},
                                 {"two\nlines", ""}}};
  const std::string text = t.str();
  CHECK(text.find("\"with,comma\"") != std::string::npos);
  CHECK(text.find("\r\n") != std::string::npos);
  const auto back = CsvTable::parse(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("value") == 1);
}

TEST_CASE("fit JSON carries parameters and both normalizers") {
  const TruncatedView view(sample(DiscreteDistribution(PowerLawParams{2.0}, 1), 300, 1), 1);
  const auto f = fit(Kind::power_law, view);
  const Json j = to_json(f);
  CHECK(j["distribution"]["kind"] == "pl");
  CHECK(j["distribution"]["alpha"].get<double>() ==
        std::get<PowerLawParams>(f.dist.spec()).alpha);
  CHECK(j["neg_log_likelihood"].get<double>() == f.neg_log_likelihood);
  CHECK(j["normalizer"]["bare"].get<double>() < j["normalizer"]["corrected"].get<double>());
  const auto reparsed = Json::parse(j.dump());
  CHECK(reparsed == j);
}

TEST_CASE("analysis rows round-trip through CSV and JSON") {
  const std::vector<CountDataset> subjects{
      draw(HookedPowerLawParams{3.0, 12.0}, 600, 2, "hooked, synthetic"),
      draw(LognormalParams{1.8, 1.1}, 600, 3, "ln"),
      CountDataset({5, 5, 5, 5, 5}, "flat")};
  const auto rows = analyze_all(subjects, XminPolicy::parse("all"), 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].subject == "hooked, synthetic");
  CHECK(rows[2].flags.size() == 3);
  CHECK_FALSE(rows[2].pl_alpha.has_value());

  const auto table = CsvTable::parse(to_table(rows).str());
  REQUIRE(table.rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = table.rows[i];
    CHECK(r[table.column("subject")] == rows[i].subject);
    CHECK(std::stoll(r[table.column("x_min")]) == rows[i].x_min);
    check_field(r[table.column("pl_alpha")], rows[i].pl_alpha);
    check_field(r[table.column("hooked_B")], rows[i].hooked_B);
    check_field(r[table.column("ll_ln")], rows[i].ll_ln);
    check_field(r[table.column("vuong_ln_hooked")], rows[i].vuong_ln_hooked);
    check_field(r[table.column("lrt_hooked_pl")], rows[i].lrt_hooked_pl);
  }

  const Json j = Json::parse(to_json(rows).dump());
  CHECK(j.is_array());
  CHECK(j[0]["ll_hooked"].get<double>() == *rows[0].ll_hooked);
  CHECK(j[2]["pl_alpha"].is_null());
}

TEST_CASE("x_min policies") {
  CHECK(XminPolicy::parse("all").mode == XminPolicy::Mode::all_cited);
  CHECK(XminPolicy::parse("scan", Kind::lognormal).scan_kind == Kind::lognormal);
  const auto fixed = XminPolicy::parse("7");
  CHECK(fixed.mode == XminPolicy::Mode::fixed);
  CHECK(fixed.fixed == 7);
  CHECK(fixed.describe() == "7");
  CHECK_THROWS_AS(XminPolicy::parse("0"), UsageError);
  CHECK_THROWS_AS(XminPolicy::parse("x"), UsageError);

  const auto data = draw(HookedPowerLawParams{2.5, 3.0}, 400, 4, "s");
  CHECK(analyze(data, fixed).x_min == 7);
  auto scan = XminPolicy::parse("scan");
  scan.candidates = {1, 2, 3, 4, 5};
  const auto row = analyze(data, scan);
  CHECK(row.x_min >= 1);
  CHECK(row.x_min <= 5);
  CHECK(analyze(CountDataset({1, 2, 3}, "tiny"), XminPolicy::parse("50")).flags ==
        std::vector<std::string>{"x_min:empty_tail"});
}

TEST_CASE("Urology-like data orders the three fits") {
  int ordered = 0;
  for (std::uint64_t r = 0; r < 5; ++r) {
    const auto row = analyze(draw(HookedPowerLawParams{3.9, 42.7}, 4250, derive_seed(5, 0, r), "u"),
                             XminPolicy::parse("all"));
    ordered += *row.ll_hooked < *row.ll_ln && *row.ll_ln < *row.ll_pl ? 1 : 0;
  }
  CHECK(ordered >= 3);
}
