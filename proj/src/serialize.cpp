#include "hookfit/serialize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "hookfit/errors.hpp"

namespace hookfit {

namespace {

Json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json optional_number(const std::optional<double>& v) {
  return v ? number_or_null(*v) : Json(nullptr);
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

std::string flag(bool b) { return b ? "true" : "false"; }

bool needs_quotes(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

void write_field(std::ostream& out, const std::string& field) {
  if (!needs_quotes(field)) {
    out << field;
    return;
  }
  out << '"';
  for (const char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::vector<std::string> fit_fields(const FitResult& fit) {
  const auto names = parameter_names(fit.kind());
  const auto values = parameter_values(fit.dist.spec());
  return {std::string(short_name(fit.kind())),
          std::to_string(fit.x_min),
          std::to_string(fit.n_tail),
          names[0],
          format_number(values[0]),
          names.size() > 1 ? names[1] : std::string(),
          values.size() > 1 ? format_number(values[1]) : std::string(),
          format_number(fit.neg_log_likelihood),
          flag(fit.converged),
          std::to_string(fit.iterations),
          format_number(fit.gradient_norm_at_exit)};
}

const std::vector<std::string> kFitHeader{
    "kind",   "x_min",              "n_tail",    "param1_name",
    "param1", "param2_name",        "param2",    "neg_log_likelihood",
    "converged", "iterations",      "gradient_norm"};

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

double parse_number(const std::string& field) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(0, "not a number: '" + field + "'");
  }
  return v;
}

Json to_json(const DistributionSpec& spec) {
  Json j;
  j["kind"] = std::string(short_name(kind_of(spec)));
  const auto names = parameter_names(kind_of(spec));
  const auto values = parameter_values(spec);
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = values[i];
  return j;
}

Json to_json(const FitResult& fit) {
  Json j;
  j["distribution"] = to_json(fit.dist.spec());
  j["x_min"] = fit.x_min;
  j["n_tail"] = fit.n_tail;
  j["neg_log_likelihood"] = number_or_null(fit.neg_log_likelihood);
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["gradient_norm"] = number_or_null(fit.gradient_norm_at_exit);
  j["normalizer"] = {{"bare", number_or_null(fit.dist.normalizer().bare())},
                     {"corrected", number_or_null(fit.dist.normalizer().value())}};
  return j;
}

Json to_json(const XminScanResult& scan) {
  Json j;
  j["kind"] = std::string(short_name(scan.kind));
  j["best_x_min"] = scan.best_x_min;
  Json rows = Json::array();
  for (const auto& c : scan.per_xmin) {
    Json r;
    r["x_min"] = c.x_min;
    r["n_tail"] = c.n_tail;
    r["score"] = number_or_null(c.score);
    r["fit"] = c.fit ? to_json(*c.fit) : Json(nullptr);
    rows.push_back(std::move(r));
  }
  j["candidates"] = std::move(rows);
  return j;
}

Json to_json(const ComparisonOutcome& o) {
  return Json{{"test", std::string(to_string(o.kind))},
              {"statistic", number_or_null(o.statistic)},
              {"threshold_05", o.threshold_05},
              {"threshold_01", o.threshold_01},
              {"better", std::string(to_string(o.better))},
              {"n", o.n},
              {"significant_05", o.significant_05},
              {"significant_01", o.significant_01},
              {"degenerate", o.degenerate}};
}

Json to_json(const CIWidthGrid& grid) {
  Json j;
  j["kind"] = std::string(short_name(grid.kind));
  j["target"] = std::string(to_string(grid.target));
  j["param1_name"] = grid.param1_name;
  j["param2_name"] = grid.param2_name;
  j["param1_axis"] = grid.param1_axis;
  j["param2_axis"] = grid.param2_axis;
  j["n_axis"] = grid.n_axis;
  j["replicates"] = grid.replicates;
  j["seed"] = grid.seed;
  Json cells = Json::array();
  for (const auto& c : grid.cells) {
    cells.push_back({{"param1", c.param1},
                     {"param2", c.param2},
                     {"n", c.n},
                     {"lower", number_or_null(c.lower)},
                     {"upper", number_or_null(c.upper)},
                     {"width", number_or_null(c.width)},
                     {"used", c.used},
                     {"excluded", c.excluded},
                     {"flagged", c.flagged}});
  }
  j["cells"] = std::move(cells);
  return j;
}

Json to_json(const LognormalCIStudy& study) {
  return Json{{"mu", to_json(study.mu)}, {"sigma", to_json(study.sigma)}};
}

Json to_json(const LLContourGrid& grid) {
  Json j;
  j["kind"] = std::string(short_name(grid.kind));
  j["param1_name"] = grid.param1_name;
  j["param2_name"] = grid.param2_name;
  j["param1_axis"] = grid.param1_axis;
  j["param2_axis"] = grid.param2_axis;
  Json cells = Json::array();
  for (const double v : grid.cells) cells.push_back(number_or_null(v));
  j["neg_log_likelihood"] = std::move(cells);
  j["valid"] = grid.valid;
  return j;
}

Json to_json(const RidgeReport& r) {
  auto params = [](const HookedPowerLawParams& p) {
    return Json{{"alpha", p.alpha}, {"B", p.B}};
  };
  return Json{{"true", params(r.truth)},
              {"fitted", params(r.fitted)},
              {"hybrid", params(r.hybrid)},
              {"neg_ll_true", number_or_null(r.neg_ll_true)},
              {"neg_ll_fitted", number_or_null(r.neg_ll_fitted)},
              {"neg_ll_hybrid", number_or_null(r.neg_ll_hybrid)},
              {"n", r.n},
              {"seed", r.seed},
              {"converged", r.converged},
              {"fit_not_worse", r.fit_not_worse}};
}

Json to_json(const AnalysisRow& row) {
  return Json{{"subject", row.subject},
              {"x_min", row.x_min},
              {"n", row.n},
              {"zeros_dropped", row.zeros_dropped},
              {"pl_alpha", optional_number(row.pl_alpha)},
              {"ln_mu", optional_number(row.ln_mu)},
              {"ln_sigma", optional_number(row.ln_sigma)},
              {"hooked_alpha", optional_number(row.hooked_alpha)},
              {"hooked_B", optional_number(row.hooked_B)},
              {"ll_pl", optional_number(row.ll_pl)},
              {"ll_ln", optional_number(row.ll_ln)},
              {"ll_hooked", optional_number(row.ll_hooked)},
              {"vuong_pl_ln", optional_number(row.vuong_pl_ln)},
              {"vuong_ln_hooked", optional_number(row.vuong_ln_hooked)},
              {"lrt_hooked_pl", optional_number(row.lrt_hooked_pl)},
              {"flags", row.flags}};
}

Json to_json(const std::vector<AnalysisRow>& rows) {
  Json j = Json::array();
  for (const auto& r : rows) j.push_back(to_json(r));
  return j;
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      write_field(out, fields[i]);
    }
    out << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::string CsvTable::str() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

CsvTable CsvTable::parse(std::istream& in) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    if (table.header.empty()) {
      table.header = std::move(record);
    } else {
      table.rows.push_back(std::move(record));
    }
    record.clear();
    any = false;
  };
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        any = true;
    }
  }
  if (quoted) throw ParseError(0, "unterminated quoted CSV field");
  if (any || !record.empty()) end_record();
  return table;
}

CsvTable CsvTable::parse(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw UsageError("CSV has no column '" + name + "'");
}

CsvTable to_table(const FitResult& fit) { return to_table(std::vector{fit}); }

CsvTable to_table(const std::vector<FitResult>& fits) {
  CsvTable t{kFitHeader, {}};
  for (const auto& f : fits) t.rows.push_back(fit_fields(f));
  return t;
}

CsvTable to_table(const XminScanResult& scan) {
  CsvTable t{{"x_min", "n_tail", "score", "best", "param1", "param2",
              "neg_log_likelihood", "converged"},
             {}};
  for (const auto& c : scan.per_xmin) {
    std::vector<double> values;
    if (c.fit) values = parameter_values(c.fit->dist.spec());
    t.rows.push_back(
        {std::to_string(c.x_min), std::to_string(c.n_tail),
         std::isfinite(c.score) ? format_number(c.score) : std::string(),
         flag(c.x_min == scan.best_x_min),
         !values.empty() ? format_number(values[0]) : std::string(),
         values.size() > 1 ? format_number(values[1]) : std::string(),
         c.fit ? format_number(c.fit->neg_log_likelihood) : std::string(),
         c.fit ? flag(c.fit->converged) : std::string()});
  }
  return t;
}

CsvTable to_table(const ComparisonOutcome& o) {
  return CsvTable{{"test", "statistic", "threshold_05", "threshold_01", "better",
                   "n", "significant_05", "significant_01", "degenerate"},
                  {{std::string(to_string(o.kind)), format_number(o.statistic),
                    format_number(o.threshold_05), format_number(o.threshold_01),
                    std::string(to_string(o.better)), std::to_string(o.n),
                    flag(o.significant_05), flag(o.significant_01),
                    flag(o.degenerate)}}};
}

CsvTable to_table(const CIWidthGrid& grid) {
  CsvTable t{{"kind", "target", grid.param1_name,
              grid.param2_name.empty() ? "param2" : grid.param2_name, "n",
              "lower", "upper", "width", "used", "excluded", "flagged"},
             {}};
  for (const auto& c : grid.cells) {
    t.rows.push_back({std::string(short_name(grid.kind)),
                      std::string(to_string(grid.target)),
                      format_number(c.param1), format_number(c.param2),
                      std::to_string(c.n), format_number(c.lower),
                      format_number(c.upper), format_number(c.width),
                      std::to_string(c.used), std::to_string(c.excluded),
                      flag(c.flagged)});
  }
  return t;
}

CsvTable to_table(const LognormalCIStudy& study) {
  CsvTable t = to_table(study.mu);
  const CsvTable s = to_table(study.sigma);
  t.rows.insert(t.rows.end(), s.rows.begin(), s.rows.end());
  return t;
}

CsvTable to_table(const LLContourGrid& grid) {
  CsvTable t{{grid.param1_name, grid.param2_name, "neg_log_likelihood", "valid"},
             {}};
  for (std::size_t i = 0; i < grid.param1_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.param2_axis.size(); ++j) {
      const std::size_t k = i * grid.param2_axis.size() + j;
      t.rows.push_back({format_number(grid.param1_axis[i]),
                        format_number(grid.param2_axis[j]),
                        format_number(grid.cells[k]), flag(grid.valid[k] != 0)});
    }
  }
  return t;
}

CsvTable to_table(const RidgeReport& r) {
  return CsvTable{
      {"true_alpha", "true_B", "fitted_alpha", "fitted_B", "hybrid_alpha",
       "hybrid_B", "neg_ll_true", "neg_ll_fitted", "neg_ll_hybrid", "n", "seed",
       "converged", "fit_not_worse"},
      {{format_number(r.truth.alpha), format_number(r.truth.B),
        format_number(r.fitted.alpha), format_number(r.fitted.B),
        format_number(r.hybrid.alpha), format_number(r.hybrid.B),
        format_number(r.neg_ll_true), format_number(r.neg_ll_fitted),
        format_number(r.neg_ll_hybrid), std::to_string(r.n),
        std::to_string(r.seed), flag(r.converged), flag(r.fit_not_worse)}}};
}

CsvTable to_table(const std::vector<AnalysisRow>& rows) {
  CsvTable t{{"subject", "x_min", "n", "zeros_dropped", "pl_alpha", "ln_mu",
              "ln_sigma", "hooked_alpha", "hooked_B", "ll_pl", "ll_ln",
              "ll_hooked", "vuong_pl_ln", "vuong_ln_hooked", "lrt_hooked_pl",
              "flags"},
             {}};
  for (const auto& r : rows) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    t.rows.push_back({r.subject, std::to_string(r.x_min), std::to_string(r.n),
                      std::to_string(r.zeros_dropped), optional_field(r.pl_alpha),
                      optional_field(r.ln_mu), optional_field(r.ln_sigma),
                      optional_field(r.hooked_alpha), optional_field(r.hooked_B),
                      optional_field(r.ll_pl), optional_field(r.ll_ln),
                      optional_field(r.ll_hooked), optional_field(r.vuong_pl_ln),
                      optional_field(r.vuong_ln_hooked),
                      optional_field(r.lrt_hooked_pl), flags});
  }
  return t;
}

CsvTable to_table(const std::vector<Count>& values) {
  CsvTable t{{"citations"}, {}};
  t.rows.reserve(values.size());
  for (const Count v : values) t.rows.push_back({std::to_string(v)});
  return t;
}

}  // namespace hookfit
