#pragma once

// JSON and CSV encodings of estimator reports, adaptive traces and tables.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcfk/adaptivity.hpp"
#include "qcfk/estimators.hpp"

namespace qcfk {

using json = nlohmann::json;

inline json to_json(const EstimatorReport& r) {
  json j;
  j["eta1"] = r.eta1;
  j["eta2"] = r.eta2;
  j["sigma_bar"] = r.sigma_bar;
  j["theta_plus"] = r.theta_plus;
  j["theta_minus"] = r.theta_minus;
  j["eta_upp_plus"] = r.eta_upp_plus;
  j["eta_upp_minus"] = r.eta_upp_minus;
  j["eta_low_plus"] = r.eta_low_plus;
  j["eta_low_minus"] = r.eta_low_minus;
  j["bound_low"] = r.bound_low;
  j["bound_high"] = r.bound_high;
  j["first_term"] = r.first_term;
  j["eta2_weighted"] = r.eta2_weighted ? json(*r.eta2_weighted) : json(nullptr);
  j["gamma"] = r.gamma ? json(*r.gamma) : json(nullptr);
  j["eta2_at"] = r.eta2_at;
  j["eta2_el"] = r.eta2_el;
  j["flags"] = {{"sigma_degenerate", r.sigma_degenerate},
                {"theta_plus_fallback", r.theta_plus_fallback},
                {"theta_minus_fallback", r.theta_minus_fallback},
                {"gamma_forced", r.gamma_forced}};
  return j;
}

inline EstimatorReport report_from_json(const json& j) {
  EstimatorReport r;
  r.eta1 = j.at("eta1");
  r.eta2 = j.at("eta2");
  r.sigma_bar = j.at("sigma_bar");
  r.theta_plus = j.at("theta_plus");
  r.theta_minus = j.at("theta_minus");
  r.eta_upp_plus = j.at("eta_upp_plus");
  r.eta_upp_minus = j.at("eta_upp_minus");
  r.eta_low_plus = j.at("eta_low_plus");
  r.eta_low_minus = j.at("eta_low_minus");
  r.bound_low = j.at("bound_low");
  r.bound_high = j.at("bound_high");
  r.first_term = j.at("first_term");
  if (!j.at("eta2_weighted").is_null()) r.eta2_weighted = j["eta2_weighted"].get<double>();
  if (!j.at("gamma").is_null()) r.gamma = j["gamma"].get<double>();
  r.eta2_at = j.at("eta2_at").get<std::vector<double>>();
  r.eta2_el = j.at("eta2_el").get<std::vector<double>>();
  const auto& f = j.at("flags");
  r.sigma_degenerate = f.at("sigma_degenerate");
  r.theta_plus_fallback = f.at("theta_plus_fallback");
  r.theta_minus_fallback = f.at("theta_minus_fallback");
  r.gamma_forced = f.at("gamma_forced");
  return r;
}

inline json to_json(const AdaptTrace& t) {
  json its = json::array();
  for (const auto& it : t.iterations) {
    its.push_back({{"iteration", it.iteration},
                   {"k", it.K ? json(*it.K) : json(nullptr)},
                   {"atomistic_count", it.atomistic_count},
                   {"tau_at", it.tau_at},
                   {"eta1", it.eta1},
                   {"eta2", it.eta2},
                   {"marked", it.marked}});
  }
  return {{"M", t.M}, {"status", std::string(to_string(t.status))}, {"iterations", its}};
}

/// How a column is rendered in CSV.
enum class ColumnKind { integer, scientific, ratio };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::scientific;
};

/**
 * Rectangular table of numbers. NaN marks an empty cell. CSV uses the
 * fixed formats of the printed tables (%.6e, %.6f); JSON keeps full precision.
 */
struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::vector<json> row_notes;  // optional per-row annotations, JSON only

  void add_row(std::vector<double> row, json note = nullptr) {
    rows.push_back(std::move(row));
    row_notes.push_back(std::move(note));
  }
};

inline std::string format_cell(double v, ColumnKind kind) {
  if (std::isnan(v)) return "";
  char buf[64];
  switch (kind) {
    case ColumnKind::integer: std::snprintf(buf, sizeof buf, "%.0f", v); break;
    case ColumnKind::scientific: std::snprintf(buf, sizeof buf, "%.6e", v); break;
    case ColumnKind::ratio: std::snprintf(buf, sizeof buf, "%.6f", v); break;
  }
  return buf;
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c].name;
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_cell(row[c], t.columns[c].kind);
    os << '\n';
  }
  return os.str();
}

/// Parses CSV written by to_csv back into a table; column kinds are taken
/// from `layout`.
inline Table parse_csv(const std::string& text, const std::vector<Column>& layout) {
  Table t;
  t.columns = layout;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw invalid_input("empty CSV");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      const auto cell = line.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
      row.push_back(cell.empty() ? std::nan("") : std::stod(cell));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (row.size() != layout.size()) throw invalid_input("CSV row has wrong number of cells");
    t.add_row(std::move(row));
  }
  return t;
}

inline json rows_to_json(const Table& t) {
  json rows = json::array();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    json row = json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const double v = t.rows[r][c];
      if (std::isnan(v))
        row[t.columns[c].name] = nullptr;
      else if (t.columns[c].kind == ColumnKind::integer)
        row[t.columns[c].name] = static_cast<long long>(v);
      else
        row[t.columns[c].name] = v;
    }
    if (!t.row_notes[r].is_null()) row.update(t.row_notes[r]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qcfk
