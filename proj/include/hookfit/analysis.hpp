#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hookfit/comparison.hpp"
#include "hookfit/dataset.hpp"
#include "hookfit/fitting.hpp"

namespace hookfit {

// How the common truncation point of a three-way analysis is chosen.
struct XminPolicy {
  enum class Mode { all_cited, fixed, scan };
  Mode mode = Mode::all_cited;
  Count fixed = 1;                  // Mode::fixed
  Kind scan_kind = Kind::power_law;  // Mode::scan: family whose KS fit picks x_min
  std::vector<Count> candidates;    // Mode::scan: empty = distinct observed values

  static XminPolicy parse(const std::string& text, Kind scan_kind = Kind::power_law);
  std::string describe() const;
};

// One subject: all three families fitted at a common x_min and compared
// pairwise. Cells that could not be computed are empty and explained in
// `flags`.
struct AnalysisRow {
  std::string subject;
  Count x_min = 1;
  std::size_t n = 0;
  std::size_t zeros_dropped = 0;
  std::optional<double> pl_alpha;
  std::optional<double> ln_mu;
  std::optional<double> ln_sigma;
  std::optional<double> hooked_alpha;
  std::optional<double> hooked_B;
  std::optional<double> ll_pl;
  std::optional<double> ll_ln;
  std::optional<double> ll_hooked;
  std::optional<double> vuong_pl_ln;      // > 0 favours the power law
  std::optional<double> vuong_ln_hooked;  // > 0 favours the lognormal
  std::optional<double> lrt_hooked_pl;
  std::vector<std::string> flags;
};

AnalysisRow analyze(const CountDataset& data, const XminPolicy& policy,
                    unsigned threads = 1);

// Rows come back in input order whatever the thread count.
std::vector<AnalysisRow> analyze_all(const std::vector<CountDataset>& subjects,
                                     const XminPolicy& policy,
                                     unsigned threads = 1);

}  // namespace hookfit
