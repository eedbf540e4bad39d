#include "hookfit/analysis.hpp"

#include <charconv>

#include "hookfit/errors.hpp"
#include "hookfit/parallel.hpp"

namespace hookfit {

XminPolicy XminPolicy::parse(const std::string& text, Kind scan_kind) {
  XminPolicy policy;
  policy.scan_kind = scan_kind;
  if (text == "all" || text == "all-cited") return policy;
  if (text == "scan") {
    policy.mode = Mode::scan;
    return policy;
  }
  Count k = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc{} || ptr != text.data() + text.size() || k < 1) {
    throw UsageError("--x-min expects a positive integer, 'scan' or 'all', got '" +
                     text + "'");
  }
  policy.mode = Mode::fixed;
  policy.fixed = k;
  return policy;
}

std::string XminPolicy::describe() const {
  switch (mode) {
    case Mode::all_cited:
      return "all";
    case Mode::fixed:
      return std::to_string(fixed);
    case Mode::scan:
      return "scan:" + std::string(short_name(scan_kind));
  }
  return "?";
}

AnalysisRow analyze(const CountDataset& data, const XminPolicy& policy,
                    unsigned threads) {
  AnalysisRow row;
  row.subject = data.source_label();
  row.zeros_dropped = data.zeros_dropped();

  switch (policy.mode) {
    case XminPolicy::Mode::all_cited:
      row.x_min = 1;
      break;
    case XminPolicy::Mode::fixed:
      row.x_min = policy.fixed;
      break;
    case XminPolicy::Mode::scan: {
      const auto candidates = policy.candidates.empty()
                                  ? default_x_min_candidates(data)
                                  : policy.candidates;
      try {
        if (candidates.empty()) {
          throw DegenerateDataError("too few observations to scan x_min");
        }
        row.x_min =
            scan_x_min(data, policy.scan_kind, candidates, threads).best_x_min;
      } catch (const DegenerateDataError&) {
        row.flags.push_back("x_min:scan_failed");
        return row;
      }
      break;
    }
  }

  std::optional<TruncatedView> tail;
  try {
    tail.emplace(truncate(data, row.x_min));
  } catch (const EmptyTailError&) {
    row.flags.push_back("x_min:empty_tail");
    return row;
  }
  const TruncatedView& view = *tail;
  row.n = view.n_tail();

  std::optional<FitResult> fits[3];
  const Kind kinds[3] = {Kind::power_law, Kind::lognormal, Kind::hooked};
  for (int i = 0; i < 3; ++i) {
    const std::string name(short_name(kinds[i]));
    try {
      fits[i] = fit(kinds[i], view);
      if (!fits[i]->converged) row.flags.push_back(name + ":not_converged");
    } catch (const DegenerateDataError&) {
      row.flags.push_back(name + ":degenerate");
    }
  }
  const auto& pl = fits[0];
  const auto& ln = fits[1];
  const auto& hk = fits[2];
  if (pl) {
    row.pl_alpha = std::get<PowerLawParams>(pl->dist.spec()).alpha;
    row.ll_pl = pl->neg_log_likelihood;
  }
  if (ln) {
    const auto p = std::get<LognormalParams>(ln->dist.spec());
    row.ln_mu = p.mu;
    row.ln_sigma = p.sigma;
    row.ll_ln = ln->neg_log_likelihood;
  }
  if (hk) {
    const auto p = std::get<HookedPowerLawParams>(hk->dist.spec());
    row.hooked_alpha = p.alpha;
    row.hooked_B = p.B;
    row.ll_hooked = hk->neg_log_likelihood;
  }

  auto vuong = [&](const FitResult& a, const FitResult& b, const char* name)
      -> std::optional<double> {
    const auto outcome = vuong_test(a, b, view);
    if (outcome.degenerate) {
      row.flags.push_back(std::string(name) + ":degenerate");
      return std::nullopt;
    }
    return outcome.statistic;
  };
  if (pl && ln) row.vuong_pl_ln = vuong(*pl, *ln, "vuong_pl_ln");
  if (ln && hk) row.vuong_ln_hooked = vuong(*ln, *hk, "vuong_ln_hooked");
  if (pl && hk) {
    try {
      row.lrt_hooked_pl = lrt_test(*pl, *hk).statistic;
    } catch (const ConsistencyError&) {
      row.flags.push_back("lrt:nesting_violated");
    }
  }
  return row;
}

std::vector<AnalysisRow> analyze_all(const std::vector<CountDataset>& subjects,
                                     const XminPolicy& policy, unsigned threads) {
  std::vector<AnalysisRow> rows(subjects.size());
  parallel_for(subjects.size(), threads, [&](std::size_t i) {
    rows[i] = analyze(subjects[i], policy, 1);
  });
  return rows;
}

}  // namespace hookfit
