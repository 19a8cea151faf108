#ifndef GIM_GRAPH_IO_HPP
#define GIM_GRAPH_IO_HPP

#include <iosfwd>
#include <string>

#include "gim/pseudo_metric.hpp"
#include "gim/radial.hpp"
#include "gim/solver_report.hpp"
#include "gim/star.hpp"
#include "gim/weighted_graph.hpp"

namespace gim {

/// Graph JSON: {"vertices": ["a","b",...], "measure": [...],
/// "edges": [[u, v, b_uv], ...]} with 0-based indices, u < v per entry,
/// b_uv > 0. Duplicate pairs are an error. Parse errors carry the offending
/// field.
GraphData read_graph_json(std::istream& in);
GraphData read_graph_json_file(const std::string& path);
std::string write_graph_json(const WeightedGraph& graph);

/// Metric CSV: header row of vertex labels, then the full symmetric table.
/// Infinity serializes as "inf". Values round-trip bit-exactly.
std::string write_metric_csv(const PseudoMetric& metric,
                             const std::vector<std::string>& labels);
PseudoMetric read_metric_csv(std::istream& in);
PseudoMetric read_metric_csv_file(const std::string& path);

/// Profile CSV: r, sphere_mass, kappa_plus, kappa_minus, boundary, term_iii,
/// term_v, partial_sum_iii, partial_sum_v (empty fields where undefined).
std::string write_profile_csv(const RadialProfile& profile);

std::string solver_report_json(const SolverReport& report);
std::string decision_json(const LargestMetricDecision& decision);

/// Shortest double decimal form that parses back to the same bits.
std::string format_double(double v);

}  // namespace gim

#endif  // GIM_GRAPH_IO_HPP
