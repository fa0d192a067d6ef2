#include "opoly/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "opoly/errors.hpp"

namespace opoly {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw StructureError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                         std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  for (const auto& f : footer_) out << "# " << f << '\n';
}

std::string measure_to_json(const DiscreteMeasure& m) {
  json j;
  j["kind"] = "measure";
  j["points"] = m.points;
  j["masses"] = m.masses;
  return j.dump(2);
}

std::string coefficients_to_json(const CoefficientSequence& c) {
  json j;
  j["kind"] = "coefficients";
  j["b"] = c.b();
  j["a"] = c.a();
  return j.dump(2);
}

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid JSON: ") + e.what());
  }
}

std::vector<double> numbers(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw DomainError(std::string("JSON document lacks the array '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw DomainError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

CoefficientSequence coefficients_from(const json& j) {
  return CoefficientSequence(numbers(j, "b"), numbers(j, "a"));
}

}  // namespace

DiscreteMeasure measure_from_json(const std::string& text) {
  const json j = parse(text);
  if (j.contains("b") && j.contains("a") && !j.contains("points")) {
    return zeros_and_masses(coefficients_from(j));
  }
  DiscreteMeasure m;
  m.points = numbers(j, "points");
  m.masses = numbers(j, "masses");
  if (m.points.size() != m.masses.size()) {
    throw DomainError("measure JSON: points and masses differ in length");
  }
  for (std::size_t i = 1; i < m.points.size(); ++i) {
    if (!(m.points[i] > m.points[i - 1])) {
      throw DomainError("measure JSON: points must be strictly increasing");
    }
  }
  return m;
}

CoefficientSequence coefficients_from_json(const std::string& text) {
  return coefficients_from(parse(text));
}

ParameterSchedule read_schedule(std::istream& in) {
  ParameterSchedule s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream row(line);
    double n;
    double alpha;
    double gamma;
    if (!(row >> n)) continue;
    if (!(row >> alpha >> gamma)) {
      throw DomainError("schedule line " + std::to_string(lineno) + ": expected n alpha gamma");
    }
    if (n != static_cast<double>(s.alpha.size())) {
      throw DomainError("schedule line " + std::to_string(lineno) + ": expected n = " +
                        std::to_string(s.alpha.size()));
    }
    s.alpha.push_back(alpha);
    s.gamma.push_back(gamma);
  }
  if (s.alpha.empty()) throw DomainError("schedule file has no rows");
  return s;
}

}  // namespace opoly
