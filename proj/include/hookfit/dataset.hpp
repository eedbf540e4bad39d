#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hookfit {

using Count = std::int64_t;

enum class InputFormat { plain, csv };

InputFormat parse_input_format(const std::string& name);

// A multiset of positive event counts (citations per article). Zero counts
// are removed during loading and only their number is kept.
class CountDataset {
 public:
  // Throws EmptyDataError when `counts` is empty and ParameterError when any
  // element is below 1.
  CountDataset(std::vector<Count> counts, std::string source_label = {},
               std::size_t zeros_dropped = 0);

  const std::vector<Count>& counts() const noexcept { return counts_; }
  std::size_t n() const noexcept { return counts_.size(); }
  const std::string& source_label() const noexcept { return source_label_; }
  std::size_t zeros_dropped() const noexcept { return zeros_dropped_; }

 private:
  std::vector<Count> counts_;
  std::string source_label_;
  std::size_t zeros_dropped_;
};

CountDataset parse_counts(std::istream& in, InputFormat format,
                          std::string source_label = {});
CountDataset load_counts(const std::filesystem::path& path, InputFormat format);

// One distinct value with its multiplicity.
struct ValueCount {
  Count value;
  Count multiplicity;
};

// The part of a dataset at or above a truncation point. Likelihood code only
// touches `histogram()`, so cost scales with distinct values, not with n.
class TruncatedView {
 public:
  TruncatedView(std::vector<Count> retained, Count x_min,
                std::size_t base_n = 0);

  Count x_min() const noexcept { return x_min_; }
  const std::vector<Count>& retained() const noexcept { return retained_; }
  std::size_t n_tail() const noexcept { return retained_.size(); }
  std::size_t base_n() const noexcept { return base_n_; }
  std::span<const ValueCount> histogram() const noexcept { return histogram_; }
  std::size_t distinct_values() const noexcept { return histogram_.size(); }
  Count max_value() const noexcept { return histogram_.back().value; }

 private:
  std::vector<Count> retained_;
  std::vector<ValueCount> histogram_;
  Count x_min_;
  std::size_t base_n_;
};

TruncatedView truncate(const CountDataset& data, Count x_min);
// Re-truncates an existing view; x_min below the view's own threshold keeps it.
TruncatedView truncate(const TruncatedView& view, Count x_min);

struct CcdfPoint {
  Count value;
  double probability;  // empirical P(X >= value)
};

std::vector<CcdfPoint> tail_ccdf(const TruncatedView& view);

}  // namespace hookfit
