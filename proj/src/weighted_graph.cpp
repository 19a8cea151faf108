#include "gim/weighted_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace gim {

namespace {

std::string pair_str(int u, int v) {
  std::ostringstream os;
  os << "(" << u << "," << v << ")";
  return os.str();
}

}  // namespace

ValidationReport validate(const GraphData& data) {
  ValidationReport report;
  auto add = [&](ValidationIssue::Kind kind, const std::string& msg) {
    report.issues.push_back({kind, msg});
  };

  const int n = data.vertex_count;
  if (static_cast<int>(data.measure.size()) != n) {
    add(ValidationIssue::Kind::kMeasureLengthMismatch,
        "measure vector has length " + std::to_string(data.measure.size()) +
            ", expected " + std::to_string(n));
  } else {
    for (int u = 0; u < n; ++u) {
      if (!(data.measure[static_cast<size_t>(u)] > 0.0)) {
        add(ValidationIssue::Kind::kNonpositiveMeasure,
            "m(" + std::to_string(u) + ") = " +
                std::to_string(data.measure[static_cast<size_t>(u)]) +
                " is not positive");
      }
    }
  }

  // Collect directed entries per unordered pair to detect duplicates and
  // symmetry violations.
  std::map<std::pair<int, int>, std::vector<std::pair<bool, double>>> seen;
  for (const auto& e : data.entries) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      add(ValidationIssue::Kind::kIndexOutOfRange,
          "edge " + pair_str(e.u, e.v) + " outside 0.." + std::to_string(n - 1));
      continue;
    }
    if (e.u == e.v) {
      add(ValidationIssue::Kind::kSelfLoop,
          "self-loop at vertex " + std::to_string(e.u));
      continue;
    }
    if (!(e.b > 0.0)) {
      add(ValidationIssue::Kind::kNonpositiveWeight,
          "b" + pair_str(e.u, e.v) + " = " + std::to_string(e.b) +
              " is not positive");
      continue;
    }
    const bool forward = e.u < e.v;
    seen[{std::min(e.u, e.v), std::max(e.u, e.v)}].push_back({forward, e.b});
  }

  std::vector<bool> touched(static_cast<size_t>(std::max(n, 0)), false);
  for (const auto& [pair, dirs] : seen) {
    touched[static_cast<size_t>(pair.first)] = true;
    touched[static_cast<size_t>(pair.second)] = true;
    bool fwd_seen = false, bwd_seen = false;
    double fwd = 0.0, bwd = 0.0;
    bool dup = false;
    for (const auto& [forward, b] : dirs) {
      if (forward) {
        if (fwd_seen) dup = true;
        fwd_seen = true;
        fwd = b;
      } else {
        if (bwd_seen) dup = true;
        bwd_seen = true;
        bwd = b;
      }
    }
    if (dup) {
      add(ValidationIssue::Kind::kDuplicatePair,
          "pair " + pair_str(pair.first, pair.second) + " listed more than once");
    }
    if (fwd_seen && bwd_seen && fwd != bwd) {
      add(ValidationIssue::Kind::kSymmetryViolation,
          "b" + pair_str(pair.first, pair.second) + " = " + std::to_string(fwd) +
              " but b" + pair_str(pair.second, pair.first) + " = " +
              std::to_string(bwd));
    }
  }
  for (int u = 0; u < n; ++u) {
    if (!touched[static_cast<size_t>(u)]) {
      add(ValidationIssue::Kind::kIsolatedVertex,
          "vertex " + std::to_string(u) + " has no edges");
    }
  }
  return report;
}

WeightedGraph WeightedGraph::build(const GraphData& data) {
  ValidationReport report = validate(data);
  if (!report.ok()) {
    std::string msg = "invalid graph:";
    for (const auto& i : report.issues)
      if (i.is_error()) msg += " [" + i.message + "]";
    throw std::invalid_argument(msg);
  }
  // Deduplicate symmetric orientations (validated equal above).
  std::map<std::pair<int, int>, double> canon;
  for (const auto& e : data.entries)
    canon[{std::min(e.u, e.v), std::max(e.u, e.v)}] = e.b;
  std::vector<Edge> edges;
  edges.reserve(canon.size());
  for (const auto& [p, b] : canon) edges.push_back({p.first, p.second, b});
  return WeightedGraph(data.vertex_count, std::move(edges), data.measure,
                       data.labels);
}

WeightedGraph::WeightedGraph(int vertex_count, std::vector<Edge> edges,
                             std::vector<double> measure,
                             std::vector<std::string> labels)
    : n_(vertex_count), measure_(std::move(measure)), labels_(std::move(labels)) {
  if (n_ <= 0) throw std::invalid_argument("vertex_count must be positive");
  if (static_cast<int>(measure_.size()) != n_)
    throw std::invalid_argument("measure length mismatch");
  for (double m : measure_)
    if (!(m > 0.0) || !std::isfinite(m))
      throw std::invalid_argument("measure must be strictly positive");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n_)
    throw std::invalid_argument("labels length mismatch");

  std::map<std::pair<int, int>, double> canon;
  for (auto& e : edges) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw std::invalid_argument("edge index out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop");
    if (!(e.b > 0.0) || !std::isfinite(e.b))
      throw std::invalid_argument("edge weight must be strictly positive");
    auto key = std::make_pair(std::min(e.u, e.v), std::max(e.u, e.v));
    auto [it, inserted] = canon.insert({key, e.b});
    if (!inserted && it->second != e.b)
      throw std::invalid_argument("conflicting duplicate edge " +
                                  pair_str(e.u, e.v));
  }
  edges_.reserve(canon.size());
  for (const auto& [p, b] : canon) edges_.push_back({p.first, p.second, b});

  adjacency_.assign(static_cast<size_t>(n_), {});
  degree_.assign(static_cast<size_t>(n_), 0.0);
  for (const auto& e : edges_) {
    adjacency_[static_cast<size_t>(e.u)].push_back({e.v, e.b});
    adjacency_[static_cast<size_t>(e.v)].push_back({e.u, e.b});
    degree_[static_cast<size_t>(e.u)] += e.b;
    degree_[static_cast<size_t>(e.v)] += e.b;
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

double WeightedGraph::edge_weight(int u, int v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_)
    throw std::out_of_range("vertex index out of range");
  if (u == v) return 0.0;
  const auto& adj = adjacency_[static_cast<size_t>(u)];
  auto it = std::lower_bound(adj.begin(), adj.end(), std::make_pair(v, 0.0));
  if (it != adj.end() && it->first == v) return it->second;
  return 0.0;
}

std::string WeightedGraph::label(int u) const {
  if (has_labels()) return labels_[static_cast<size_t>(u)];
  return std::to_string(u);
}

GraphData WeightedGraph::to_data() const {
  return GraphData{n_, edges_, measure_, labels_};
}

ComponentStructure components(const WeightedGraph& graph) {
  const int n = graph.vertex_count();
  ComponentStructure cs;
  cs.component_id.assign(static_cast<size_t>(n), -1);
  for (int start = 0; start < n; ++start) {
    if (cs.component_id[static_cast<size_t>(start)] >= 0) continue;
    const int id = cs.component_count++;
    std::queue<int> q;
    q.push(start);
    cs.component_id[static_cast<size_t>(start)] = id;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, b] : graph.neighbors(u)) {
        (void)b;
        if (cs.component_id[static_cast<size_t>(v)] < 0) {
          cs.component_id[static_cast<size_t>(v)] = id;
          q.push(v);
        }
      }
    }
  }
  return cs;
}

std::vector<std::vector<int>> ComponentStructure::members() const {
  std::vector<std::vector<int>> out(static_cast<size_t>(component_count));
  for (int u = 0; u < static_cast<int>(component_id.size()); ++u)
    out[static_cast<size_t>(component_id[static_cast<size_t>(u)])].push_back(u);
  return out;
}

WeightedGraph make_no_intrinsic_example(int N) {
  if (N < 2) throw std::invalid_argument("need N >= 2");
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(N) * static_cast<size_t>(N - 1) / 2);
  std::vector<double> measure(static_cast<size_t>(N));
  std::vector<std::string> labels(static_cast<size_t>(N));
  for (int u = 0; u < N; ++u) {
    const double i = static_cast<double>(u + 1);  // math index is 1-based
    measure[static_cast<size_t>(u)] = 1.0 / (i * i * i);
    labels[static_cast<size_t>(u)] = std::to_string(u + 1);
    for (int v = u + 1; v < N; ++v) {
      const double j = static_cast<double>(v + 1);
      edges.push_back({u, v, 1.0 / (i * i + j * j)});
    }
  }
  return WeightedGraph(N, std::move(edges), std::move(measure), std::move(labels));
}

WeightedGraph make_star(const std::vector<double>& leaf_measures,
                        double center_measure,
                        const std::vector<double>& edge_weights) {
  if (leaf_measures.empty()) throw std::invalid_argument("star needs leaves");
  if (leaf_measures.size() != edge_weights.size())
    throw std::invalid_argument("leaf_measures and edge_weights length mismatch");
  if (!(center_measure > 0.0))
    throw std::invalid_argument("center measure must be positive");
  const int L = static_cast<int>(leaf_measures.size());
  std::vector<double> measure;
  measure.reserve(static_cast<size_t>(L) + 1);
  measure.push_back(center_measure);
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(L));
  for (int k = 0; k < L; ++k) {
    if (!(leaf_measures[static_cast<size_t>(k)] > 0.0))
      throw std::invalid_argument("leaf measure must be positive");
    if (!(edge_weights[static_cast<size_t>(k)] > 0.0))
      throw std::invalid_argument("edge weight must be positive");
    measure.push_back(leaf_measures[static_cast<size_t>(k)]);
    edges.push_back({0, k + 1, edge_weights[static_cast<size_t>(k)]});
  }
  return WeightedGraph(L + 1, std::move(edges), std::move(measure));
}

}  // namespace gim
