// hookfit: fit, compare and simulate discrete heavy-tailed count models.
//
// Data goes to --output (stdout by default) as JSON or CSV; warnings and
// errors go to stderr only. Exit codes: 0 success, 1 usage, 2 I/O,
// 3 degenerate data, 4 internal consistency.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hookfit/hookfit.hpp"
#include "hookfit/serialize.hpp"

namespace {

using namespace hookfit;

struct Common {
  std::string output = "-";
  std::string format = "json";
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

struct InputOptions {
  std::vector<std::string> inputs;
  std::string input_format = "auto";
};

InputFormat detect_format(const std::string& path, const std::string& requested) {
  if (requested != "auto") return parse_input_format(requested);
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".csv") {
    return InputFormat::csv;
  }
  return InputFormat::plain;
}

CountDataset load(const std::string& path, const std::string& format) {
  return load_counts(path, detect_format(path, format));
}

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

void emit(const Common& common, const Json& json, const CsvTable& table) {
  std::ostringstream text;
  if (common.format == "json") {
    text << json.dump(2) << '\n';
  } else if (common.format == "csv") {
    table.write(text);
  } else {
    throw UsageError("--format expects json or csv");
  }
  if (common.output == "-") {
    std::cout << text.str();
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream out(common.output, std::ios::binary);
  if (!out) throw IoError("cannot open '" + common.output + "' for writing");
  out << text.str();
  if (!out) throw IoError("failed writing '" + common.output + "'");
}

void warn_fit(const FitResult& f) {
  if (!f.converged) {
    warn(std::string(short_name(f.kind())) + " fit did not converge (gradient norm " +
         format_number(f.gradient_norm_at_exit) + ")");
  }
}

// "a,b,c" or "start:stop:step" (inclusive).
std::vector<double> parse_real_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_number(item));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw UsageError("grid '" + text + "' must be start:stop:step with step > 0");
    }
    const double span = (parts[1] - parts[0]) / parts[2];
    const auto steps = static_cast<long>(std::floor(span + 1e-9));
    for (long i = 0; i <= steps; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

std::vector<Count> parse_count_grid(const std::string& text) {
  std::vector<Count> out;
  for (const double v : parse_real_grid(text)) {
    if (v != std::floor(v) || v < 1) {
      throw UsageError("grid '" + text + "' must contain positive integers");
    }
    out.push_back(static_cast<Count>(v));
  }
  return out;
}

std::vector<Count> parse_candidates(const std::string& text, const CountDataset& data) {
  if (text.empty()) return default_x_min_candidates(data);
  return parse_count_grid(text);
}

Count resolve_x_min(const std::string& policy_text, const CountDataset& data, Kind kind,
                    const std::string& range, unsigned threads) {
  const XminPolicy policy = XminPolicy::parse(policy_text, kind);
  switch (policy.mode) {
    case XminPolicy::Mode::all_cited:
      return 1;
    case XminPolicy::Mode::fixed:
      return policy.fixed;
    case XminPolicy::Mode::scan:
      return scan_x_min(data, kind, parse_candidates(range, data), threads).best_x_min;
  }
  return 1;
}

void add_common(CLI::App* cmd, Common& c, bool seeded, bool threaded) {
  cmd->add_option("-o,--output", c.output, "Output file, '-' for stdout")
      ->capture_default_str();
  cmd->add_option("--format", c.format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  if (seeded) cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  if (threaded) {
    cmd->add_option("--threads", c.threads, "Worker threads, 0 = all cores")
        ->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit, compare and simulate discrete truncated power law, hooked "
               "power law and lognormal models for count data."};
  app.require_subcommand(1);

  Common common;
  InputOptions input;
  std::string dist = "all";
  std::string x_min = "all";
  std::string x_min_range;
  std::string scan_dist = "pl";

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit one or all distributions to a dataset");
  fit_cmd->add_option("-i,--input", input.inputs, "Count file")->required()->expected(1);
  fit_cmd->add_option("--input-format", input.input_format, "plain, csv or auto");
  fit_cmd->add_option("--dist", dist, "pl, ln, hooked or all")->capture_default_str();
  fit_cmd->add_option("--x-min", x_min, "Integer, 'scan' or 'all'")->capture_default_str();
  fit_cmd->add_option("--x-min-range", x_min_range, "Scan candidates (list or a:b:step)");
  add_common(fit_cmd, common, false, true);

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "Choose x_min by KS distance");
  scan_cmd->add_option("-i,--input", input.inputs, "Count file")->required()->expected(1);
  scan_cmd->add_option("--input-format", input.input_format, "plain, csv or auto");
  scan_cmd->add_option("--dist", dist, "pl, ln or hooked")->required();
  scan_cmd->add_option("--x-min-range", x_min_range, "Candidates (list or a:b:step)");
  add_common(scan_cmd, common, false, true);

  // analyze
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Fit all three families and compare them pairwise");
  analyze_cmd->add_option("-i,--input", input.inputs, "Count files, one per subject")
      ->required();
  analyze_cmd->add_option("--input-format", input.input_format, "plain, csv or auto");
  analyze_cmd->add_option("--x-min", x_min, "Integer, 'scan' or 'all'")->capture_default_str();
  analyze_cmd->add_option("--scan-dist", scan_dist, "Family used by --x-min scan (pl or ln)")
      ->capture_default_str();
  analyze_cmd->add_option("--x-min-range", x_min_range, "Scan candidates (list or a:b:step)");
  add_common(analyze_cmd, common, false, true);

  // compare
  std::string first = "pl";
  std::string second = "ln";
  std::string test = "auto";
  auto* compare_cmd = app.add_subcommand("compare", "Compare two fitted families");
  compare_cmd->add_option("-i,--input", input.inputs, "Count file")->required()->expected(1);
  compare_cmd->add_option("--input-format", input.input_format, "plain, csv or auto");
  compare_cmd->add_option("--first", first, "First family")->capture_default_str();
  compare_cmd->add_option("--second", second, "Second family")->capture_default_str();
  compare_cmd->add_option("--test", test, "auto, vuong or lrt")->capture_default_str();
  compare_cmd->add_option("--x-min", x_min, "Integer, 'scan' or 'all'")->capture_default_str();
  compare_cmd->add_option("--scan-dist", scan_dist, "Family used by --x-min scan")
      ->capture_default_str();
  compare_cmd->add_option("--x-min-range", x_min_range, "Scan candidates");
  add_common(compare_cmd, common, false, true);

  // sample
  double alpha = 2.5, B = 0.0, mu = 2.0, sigma = 1.0;
  Count sample_x_min = 1;
  std::size_t n = 1000;
  auto* sample_cmd = app.add_subcommand("sample", "Draw from a distribution");
  sample_cmd->add_option("--dist", dist, "pl, ln or hooked")->required();
  sample_cmd->add_option("--alpha", alpha)->capture_default_str();
  sample_cmd->add_option("--B", B)->capture_default_str();
  sample_cmd->add_option("--mu", mu)->capture_default_str();
  sample_cmd->add_option("--sigma", sigma)->capture_default_str();
  sample_cmd->add_option("--x-min", sample_x_min)->capture_default_str();
  sample_cmd->add_option("-n,--n", n, "Number of draws")->capture_default_str();
  add_common(sample_cmd, common, true, false);

  // ci-study
  std::string preset = "paper";
  std::string alpha_grid, mu_grid, sigma_grid, n_grid;
  int replicates = 0;
  double study_B = 10.0;
  auto* ci_cmd = app.add_subcommand("ci-study", "Monte-Carlo 90% CI widths of fitted parameters");
  ci_cmd->add_option("--dist", dist, "hooked, pl or ln")->required();
  ci_cmd->add_option("--preset", preset, "paper (R=500) or desk (R=100)")
      ->check(CLI::IsMember({"paper", "desk"}))
      ->capture_default_str();
  ci_cmd->add_option("--alpha-grid", alpha_grid, "Default 2:10:1");
  ci_cmd->add_option("--B", study_B, "Fixed B for the hooked study")->capture_default_str();
  ci_cmd->add_option("--mu-grid", mu_grid, "Default 0.5,1.6,2.7");
  ci_cmd->add_option("--sigma-grid", sigma_grid, "Default 1.0,1.3,1.6");
  ci_cmd->add_option("--n-grid", n_grid, "Default 500,1000,2000,4000");
  ci_cmd->add_option("--replicates", replicates, "Overrides the preset");
  add_common(ci_cmd, common, true, true);

  // contour
  std::string p1_axis, p2_axis;
  auto* contour_cmd = app.add_subcommand("contour", "Negative log-likelihood over a grid");
  contour_cmd->add_option("-i,--input", input.inputs, "Count file")->required()->expected(1);
  contour_cmd->add_option("--input-format", input.input_format, "plain, csv or auto");
  contour_cmd->add_option("--dist", dist, "hooked or ln")->required();
  contour_cmd->add_option("--x-min", x_min, "Integer or 'all'")->capture_default_str();
  contour_cmd->add_option("--p1-axis", p1_axis, "alpha or mu axis (list or a:b:step)")
      ->required();
  contour_cmd->add_option("--p2-axis", p2_axis, "B or sigma axis (list or a:b:step)")
      ->required();
  add_common(contour_cmd, common, false, false);

  // ridge
  double ridge_alpha = 3.0, ridge_B = 10.0;
  std::size_t ridge_n = 500;
  auto* ridge_cmd = app.add_subcommand("ridge", "Fit vs truth vs hybrid on one hooked sample");
  ridge_cmd->add_option("--alpha", ridge_alpha)->capture_default_str();
  ridge_cmd->add_option("--B", ridge_B)->capture_default_str();
  ridge_cmd->add_option("-n,--n", ridge_n)->capture_default_str();
  add_common(ridge_cmd, common, true, false);

  // slope-threshold
  double tolerance = 0.1, slope_B = 0.0;
  auto* slope_cmd = app.add_subcommand(
      "slope-threshold", "Citations above which the hooked log-log slope is within T of -alpha");
  slope_cmd->add_option("-T,--T", tolerance)->required();
  slope_cmd->add_option("--B", slope_B)->required();
  std::string slope_format = "text";
  slope_cmd->add_option("--format", slope_format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  slope_cmd->add_option("-o,--output", common.output)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (*fit_cmd) {
      const auto data = load(input.inputs.front(), input.input_format);
      std::vector<Kind> kinds;
      if (dist == "all") {
        kinds = {Kind::power_law, Kind::lognormal, Kind::hooked};
      } else {
        kinds = {parse_kind(dist)};
      }
      Json fits = Json::array();
      std::vector<FitResult> results;
      for (const Kind kind : kinds) {
        const Count k = resolve_x_min(x_min, data, kind, x_min_range, common.threads);
        results.push_back(fit(kind, truncate(data, k)));
        warn_fit(results.back());
        fits.push_back(to_json(results.back()));
      }
      Json j{{"subject", data.source_label()},
             {"n", data.n()},
             {"zeros_dropped", data.zeros_dropped()},
             {"x_min_policy", x_min},
             {"fits", fits}};
      emit(common, j, to_table(results));
    } else if (*scan_cmd) {
      const auto data = load(input.inputs.front(), input.input_format);
      const auto result = scan_x_min(data, parse_kind(dist),
                                     parse_candidates(x_min_range, data), common.threads);
      emit(common, to_json(result), to_table(result));
    } else if (*analyze_cmd) {
      std::vector<CountDataset> subjects;
      for (const auto& path : input.inputs) {
        subjects.push_back(load(path, input.input_format));
        if (subjects.back().zeros_dropped() > 0) {
          warn(path + ": dropped " + std::to_string(subjects.back().zeros_dropped()) +
               " zero counts");
        }
      }
      XminPolicy policy = XminPolicy::parse(x_min, parse_kind(scan_dist));
      if (!x_min_range.empty()) policy.candidates = parse_count_grid(x_min_range);
      const auto rows = analyze_all(subjects, policy, common.threads);
      for (const auto& row : rows) {
        for (const auto& f : row.flags) warn(row.subject + ": " + f);
      }
      emit(common, to_json(rows), to_table(rows));
    } else if (*compare_cmd) {
      const auto data = load(input.inputs.front(), input.input_format);
      const Kind a = parse_kind(first);
      const Kind b = parse_kind(second);
      const Count k =
          resolve_x_min(x_min, data, parse_kind(scan_dist), x_min_range, common.threads);
      const TruncatedView view = truncate(data, k);
      const FitResult fa = fit(a, view);
      const FitResult fb = fit(b, view);
      warn_fit(fa);
      warn_fit(fb);
      const bool nested = a == Kind::power_law && b == Kind::hooked;
      if (test == "lrt" && !nested) {
        throw UsageError("--test lrt needs --first pl --second hooked");
      }
      const ComparisonOutcome outcome = (test == "lrt" || (test == "auto" && nested))
                                            ? lrt_test(fa, fb)
                                            : vuong_test(fa, fb, view);
      Json j{{"subject", data.source_label()},
             {"x_min", k},
             {"first", to_json(fa)},
             {"second", to_json(fb)},
             {"outcome", to_json(outcome)}};
      emit(common, j, to_table(outcome));
    } else if (*sample_cmd) {
      const Kind kind = parse_kind(dist);
      const DistributionSpec spec = kind == Kind::power_law ? DistributionSpec{PowerLawParams{alpha}}
                                    : kind == Kind::hooked
                                        ? DistributionSpec{HookedPowerLawParams{alpha, B}}
                                        : DistributionSpec{LognormalParams{mu, sigma}};
      const DiscreteDistribution d(spec, sample_x_min);
      const auto draws = sample(d, n, common.seed);
      Json j{{"distribution", to_json(spec)},
             {"x_min", sample_x_min},
             {"seed", common.seed},
             {"values", draws}};
      emit(common, j, to_table(draws));
    } else if (*ci_cmd) {
      StudyOptions options;
      options.replicates = replicates > 0 ? replicates : (preset == "desk" ? 100 : 500);
      options.seed = common.seed;
      options.threads = common.threads;
      const auto ns = parse_count_grid(n_grid.empty() ? "500,1000,2000,4000" : n_grid);
      const Kind kind = parse_kind(dist);
      auto report = [](const CIWidthGrid& g) {
        for (const auto& c : g.cells) {
          if (c.excluded > 0) {
            warn(std::string(to_string(g.target)) + " cell (" + format_number(c.param1) +
                 ", " + format_number(c.param2) + ", n=" + std::to_string(c.n) +
                 "): excluded " + std::to_string(c.excluded) + " replicates" +
                 (c.flagged ? " [flagged]" : ""));
          }
        }
      };
      if (kind == Kind::lognormal) {
        const auto study = lognormal_ci_study(
            parse_real_grid(mu_grid.empty() ? "0.5,1.6,2.7" : mu_grid),
            parse_real_grid(sigma_grid.empty() ? "1.0,1.3,1.6" : sigma_grid), ns, options);
        report(study.mu);
        emit(common, to_json(study), to_table(study));
      } else {
        const auto grid = ci_width_study(
            kind, parse_real_grid(alpha_grid.empty() ? "2:10:1" : alpha_grid), ns, options,
            study_B);
        report(grid);
        emit(common, to_json(grid), to_table(grid));
      }
    } else if (*contour_cmd) {
      const auto data = load(input.inputs.front(), input.input_format);
      const XminPolicy policy = XminPolicy::parse(x_min);
      if (policy.mode == XminPolicy::Mode::scan) {
        throw UsageError("contour takes a fixed --x-min");
      }
      const TruncatedView view =
          truncate(data, policy.mode == XminPolicy::Mode::fixed ? policy.fixed : 1);
      const auto grid =
          ll_contour(view, parse_kind(dist), parse_real_grid(p1_axis), parse_real_grid(p2_axis));
      emit(common, to_json(grid), to_table(grid));
    } else if (*ridge_cmd) {
      const auto r = ridge_demo(ridge_alpha, ridge_B, ridge_n, common.seed);
      if (!r.converged) warn("hooked fit did not converge");
      if (!r.fit_not_worse) warn("fitted parameters score worse than the truth");
      emit(common, to_json(r), to_table(r));
    } else if (*slope_cmd) {
      const double x = slope_tolerance_threshold(tolerance, slope_B);
      if (slope_format == "text") {
        common.format = "json";
        if (common.output == "-") {
          std::cout << format_number(x) << '\n';
        } else {
          std::ofstream out(common.output);
          if (!(out << format_number(x) << '\n')) {
            throw IoError("cannot write '" + common.output + "'");
          }
        }
      } else {
        common.format = slope_format;
        emit(common, Json{{"T", tolerance}, {"B", slope_B}, {"threshold", x}},
             CsvTable{{"T", "B", "threshold"},
                      {{format_number(tolerance), format_number(slope_B),
                        format_number(x)}}});
      }
    }
  } catch (const hookfit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::internal);
  }
  return 0;
}
