#include "hookfit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <istream>
#include <string_view>

#include "hookfit/errors.hpp"

namespace hookfit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Count parse_count(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  Count value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "expected a base-10 integer, got '" +
                               std::string(field) + "'");
  }
  if (value < 0) {
    throw ParseError(line, "negative count " + std::to_string(value));
  }
  return value;
}

// Splits one CSV record. Quoted fields may contain commas and doubled quotes;
// embedded newlines are not supported.
std::vector<std::string> split_csv_record(std::string_view record,
                                          std::size_t line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < record.size(); ++i) {
    const char c = record[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < record.size() && record[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      if (!trim(current).empty()) {
        throw ParseError(line, "stray quote inside unquoted field");
      }
      current.clear();
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r' || i + 1 != record.size()) {
      current.push_back(c);
    }
  }
  if (quoted) throw ParseError(line, "unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

InputFormat parse_input_format(const std::string& name) {
  if (name == "plain" || name == "txt") return InputFormat::plain;
  if (name == "csv") return InputFormat::csv;
  throw UsageError("unknown input format '" + name + "' (expected plain|csv)");
}

CountDataset::CountDataset(std::vector<Count> counts, std::string source_label,
                           std::size_t zeros_dropped)
    : counts_(std::move(counts)),
      source_label_(std::move(source_label)),
      zeros_dropped_(zeros_dropped) {
  if (counts_.empty()) {
    throw EmptyDataError("dataset '" + source_label_ +
                         "' has no positive counts");
  }
  for (const Count c : counts_) {
    if (c < 1) {
      throw ParameterError("counts must be >= 1, got " + std::to_string(c));
    }
  }
}

CountDataset parse_counts(std::istream& in, InputFormat format,
                          std::string source_label) {
  std::vector<Count> counts;
  std::size_t zeros = 0;
  std::string line;
  std::size_t line_no = 0;
  std::size_t column = 0;
  bool have_header = format == InputFormat::plain;
  std::size_t pending_blank = 0;

  auto accept = [&](Count value) {
    if (value == 0) {
      ++zeros;
    } else {
      counts.push_back(value);
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      // Blank lines are tolerated only at the end of the file.
      if (pending_blank == 0) pending_blank = line_no;
      continue;
    }
    if (pending_blank != 0) {
      throw ParseError(pending_blank, "blank line inside data");
    }
    if (!have_header) {
      const auto header = split_csv_record(line, line_no);
      const auto it = std::find_if(header.begin(), header.end(),
                                   [](const std::string& h) {
                                     return trim(h) == "citations";
                                   });
      if (it == header.end()) {
        throw ParseError(line_no, "CSV header has no 'citations' column");
      }
      column = static_cast<std::size_t>(it - header.begin());
      have_header = true;
      continue;
    }
    if (format == InputFormat::plain) {
      accept(parse_count(line, line_no));
    } else {
      const auto fields = split_csv_record(line, line_no);
      if (column >= fields.size()) {
        throw ParseError(line_no, "row has no 'citations' field");
      }
      accept(parse_count(fields[column], line_no));
    }
  }
  if (in.bad()) throw IoError("read failure on '" + source_label + "'");
  if (counts.empty()) {
    throw EmptyDataError("no positive counts in '" + source_label + "'");
  }
  return CountDataset(std::move(counts), std::move(source_label), zeros);
}

CountDataset load_counts(const std::filesystem::path& path,
                         InputFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_counts(in, format, path.string());
}

TruncatedView::TruncatedView(std::vector<Count> retained, Count x_min,
                             std::size_t base_n)
    : retained_(std::move(retained)),
      x_min_(x_min),
      base_n_(base_n == 0 ? retained_.size() : base_n) {
  if (x_min_ < 1) {
    throw ParameterError("x_min must be >= 1, got " + std::to_string(x_min_));
  }
  if (retained_.empty()) {
    throw EmptyTailError("no observations at or above x_min = " +
                         std::to_string(x_min_));
  }
  std::vector<Count> sorted = retained_;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < x_min_) {
    throw SupportError("observation " + std::to_string(sorted.front()) +
                       " below x_min = " + std::to_string(x_min_));
  }
  for (const Count v : sorted) {
    if (!histogram_.empty() && histogram_.back().value == v) {
      ++histogram_.back().multiplicity;
    } else {
      histogram_.push_back({v, 1});
    }
  }
}

TruncatedView truncate(const CountDataset& data, Count x_min) {
  if (x_min < 1) {
    throw ParameterError("x_min must be >= 1, got " + std::to_string(x_min));
  }
  std::vector<Count> kept;
  kept.reserve(data.n());
  std::copy_if(data.counts().begin(), data.counts().end(),
               std::back_inserter(kept),
               [x_min](Count c) { return c >= x_min; });
  return TruncatedView(std::move(kept), x_min, data.n());
}

TruncatedView truncate(const TruncatedView& view, Count x_min) {
  const Count threshold = std::max(x_min, view.x_min());
  std::vector<Count> kept;
  std::copy_if(view.retained().begin(), view.retained().end(),
               std::back_inserter(kept),
               [threshold](Count c) { return c >= threshold; });
  return TruncatedView(std::move(kept), threshold, view.base_n());
}

std::vector<CcdfPoint> tail_ccdf(const TruncatedView& view) {
  std::vector<CcdfPoint> out;
  out.reserve(view.distinct_values());
  const auto n = static_cast<double>(view.n_tail());
  Count at_or_above = static_cast<Count>(view.n_tail());
  for (const auto& [value, mult] : view.histogram()) {
    out.push_back({value, static_cast<double>(at_or_above) / n});
    at_or_above -= mult;
  }
  return out;
}

}  // namespace hookfit
