#pragma once

// CSV and JSON serialization of measures, coefficient sequences and schedules.

#include <cstdio>
#include <iosfwd>
#include <string>
#include <vector>

#include "opoly/polycore.hpp"
#include "opoly/spectral.hpp"

namespace opoly {

/// "%.15e"
std::string format_number(double v);

/// Comma-separated table: header row, data rows, then footer lines prefixed "# ".
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  /// Cells are written verbatim; use format_number for reals.
  void add_row(std::vector<std::string> cells);
  void add_footer(std::string line) { footer_.push_back(std::move(line)); }
  void write(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> footer_;
};

std::string measure_to_json(const DiscreteMeasure& m);
std::string coefficients_to_json(const CoefficientSequence& c);

/// Accepts {"points": [...], "masses": [...]} or a coefficient document
/// {"b": [...], "a": [...]} (whose measure is then computed).
DiscreteMeasure measure_from_json(const std::string& text);
CoefficientSequence coefficients_from_json(const std::string& text);

/// Rows "n alpha_n gamma_n" (whitespace or comma separated, '#' comments),
/// n = 0, 1, 2, ... without gaps.
ParameterSchedule read_schedule(std::istream& in);

}  // namespace opoly
