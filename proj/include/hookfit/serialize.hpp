#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hookfit/analysis.hpp"
#include "hookfit/comparison.hpp"
#include "hookfit/fitting.hpp"
#include "hookfit/simulation.hpp"

namespace hookfit {

using Json = nlohmann::ordered_json;

Json to_json(const DistributionSpec& spec);
Json to_json(const FitResult& fit);
Json to_json(const XminScanResult& scan);
Json to_json(const ComparisonOutcome& outcome);
Json to_json(const CIWidthGrid& grid);
Json to_json(const LognormalCIStudy& study);
Json to_json(const LLContourGrid& grid);
Json to_json(const RidgeReport& report);
Json to_json(const AnalysisRow& row);
Json to_json(const std::vector<AnalysisRow>& rows);

// A header plus rows of already formatted fields; written as RFC 4180 CSV.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out) const;
  std::string str() const;
  static CsvTable parse(std::istream& in);
  static CsvTable parse(const std::string& text);
  std::size_t column(const std::string& name) const;
};

// Shortest text that reads back to the same double; NaN becomes empty.
std::string format_number(double value);
double parse_number(const std::string& field);

CsvTable to_table(const FitResult& fit);
CsvTable to_table(const std::vector<FitResult>& fits);
CsvTable to_table(const XminScanResult& scan);
CsvTable to_table(const ComparisonOutcome& outcome);
CsvTable to_table(const CIWidthGrid& grid);  // long format
CsvTable to_table(const LognormalCIStudy& study);
CsvTable to_table(const LLContourGrid& grid);  // long format
CsvTable to_table(const RidgeReport& report);
CsvTable to_table(const std::vector<AnalysisRow>& rows);
CsvTable to_table(const std::vector<Count>& values);

}  // namespace hookfit
