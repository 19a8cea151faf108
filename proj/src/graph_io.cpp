#include "gim/graph_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gim/radial.hpp"

namespace gim {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double_field(const std::string& s, const std::string& where) {
  if (s == "inf") return kInfDistance;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("bad numeric field '" + s + "' in " + where);
  return v;
}

}  // namespace

GraphData read_graph_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("graph JSON parse error: ") +
                                e.what());
  }
  GraphData data;
  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw std::invalid_argument("graph JSON: missing 'vertices' array");
  for (const auto& v : j["vertices"]) {
    if (!v.is_string())
      throw std::invalid_argument("graph JSON: vertex labels must be strings");
    data.labels.push_back(v.get<std::string>());
  }
  data.vertex_count = static_cast<int>(data.labels.size());

  if (!j.contains("measure") || !j["measure"].is_array())
    throw std::invalid_argument("graph JSON: missing 'measure' array");
  for (const auto& m : j["measure"]) {
    if (!m.is_number())
      throw std::invalid_argument("graph JSON: measure entries must be numbers");
    data.measure.push_back(m.get<double>());
  }

  if (!j.contains("edges") || !j["edges"].is_array())
    throw std::invalid_argument("graph JSON: missing 'edges' array");
  size_t k = 0;
  for (const auto& e : j["edges"]) {
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument("graph JSON: " + where +
                                  " must be [u, v, b]");
    if (!e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number())
      throw std::invalid_argument("graph JSON: " + where +
                                  " must hold two indices and a weight");
    const int u = e[0].get<int>();
    const int v = e[1].get<int>();
    if (u >= v)
      throw std::invalid_argument("graph JSON: " + where +
                                  " must have u < v");
    data.entries.push_back({u, v, e[2].get<double>()});
    ++k;
  }
  return data;
}

GraphData read_graph_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_graph_json(in);
}

std::string write_graph_json(const WeightedGraph& graph) {
  json j;
  j["vertices"] = json::array();
  for (int v = 0; v < graph.vertex_count(); ++v)
    j["vertices"].push_back(graph.label(v));
  j["measure"] = graph.measures();
  j["edges"] = json::array();
  for (const auto& e : graph.edges())
    j["edges"].push_back(json::array({e.u, e.v, e.b}));
  return j.dump(2) + "\n";
}

std::string write_metric_csv(const PseudoMetric& metric,
                             const std::vector<std::string>& labels) {
  const int n = metric.size();
  std::ostringstream out;
  for (int j = 0; j < n; ++j) {
    if (j) out << ",";
    out << (j < static_cast<int>(labels.size()) ? labels[static_cast<size_t>(j)]
                                                : std::to_string(j));
  }
  out << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ",";
      out << format_double(metric(i, j));
    }
    out << "\n";
  }
  return out.str();
}

PseudoMetric read_metric_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("metric CSV: empty input");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const int n = static_cast<int>(header.size());
  if (n == 0) throw std::invalid_argument("metric CSV: empty header");
  PseudoMetric metric(n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw std::invalid_argument("metric CSV: missing row " +
                                  std::to_string(i));
    std::stringstream ss(line);
    std::string cell;
    int j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= n)
        throw std::invalid_argument("metric CSV: row " + std::to_string(i) +
                                    " has too many fields");
      const double v = parse_double_field(
          cell, "row " + std::to_string(i) + " column " + std::to_string(j));
      if (i == j) {
        if (v != 0.0)
          throw std::invalid_argument("metric CSV: nonzero diagonal at " +
                                      std::to_string(i));
      } else if (i < j) {
        metric.set(i, j, v);
      } else {
        if (v != metric(j, i))
          throw std::invalid_argument("metric CSV: asymmetric entry at row " +
                                      std::to_string(i) + " column " +
                                      std::to_string(j));
      }
      ++j;
    }
    if (j != n)
      throw std::invalid_argument("metric CSV: row " + std::to_string(i) +
                                  " has " + std::to_string(j) + " fields");
  }
  return metric;
}

PseudoMetric read_metric_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_metric_csv(in);
}

std::string write_profile_csv(const RadialProfile& profile) {
  std::ostringstream out;
  out << "r,sphere_mass,kappa_plus,kappa_minus,boundary,term_iii,term_v,"
         "partial_sum_iii,partial_sum_v\n";
  auto st = series_terms(profile);
  const int R = profile.horizon;
  for (int r = 0; r <= R; ++r) {
    out << r << "," << format_double(profile.sphere_mass[static_cast<size_t>(r)]);
    if (r < R)
      out << "," << format_double(profile.kappa_plus[static_cast<size_t>(r)]);
    else
      out << ",";  // unknown beyond the truncation
    out << "," << format_double(profile.kappa_minus[static_cast<size_t>(r)]);
    if (r < R)
      out << "," << format_double(profile.boundary(r));
    else
      out << ",";
    if (r >= 1 && r <= R - 1) {
      const size_t k = static_cast<size_t>(r - 1);
      out << "," << format_double(st.term_iii[k]) << ","
          << format_double(st.term_v[k]) << ","
          << format_double(st.partial_iii[k]) << ","
          << format_double(st.partial_v[k]);
    } else {
      out << ",,,,";
    }
    out << "\n";
  }
  return out.str();
}

std::string solver_report_json(const SolverReport& report) {
  json j;
  j["value"] = report.value;
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["max_violation"] = report.max_violation;
  j["stationarity"] = report.stationarity;
  j["gap_bound"] = report.gap_bound;
  if (!report.note.empty()) j["note"] = report.note;
  return j.dump(2) + "\n";
}

std::string decision_json(const LargestMetricDecision& decision) {
  json j;
  j["is_star"] = decision.classification.is_star;
  j["is_galaxy"] = decision.classification.is_galaxy;
  j["centers"] = decision.classification.centers;
  j["condition_per_center"] = decision.classification.measure_condition;
  j["verdict"] = decision.exists_largest;
  j["reason"] = decision.reason;
  return j.dump(2) + "\n";
}

}  // namespace gim
