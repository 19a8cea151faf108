#ifndef GIM_WEIGHTED_GRAPH_HPP
#define GIM_WEIGHTED_GRAPH_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gim {

/// One stored edge; kept with u < v so each unordered pair appears once.
struct Edge {
  int u = 0;
  int v = 0;
  double b = 0.0;
};

/// Raw ingestion form, prior to invariant enforcement. Entries may contain
/// self-loops, duplicates or asymmetric (u,v)/(v,u) pairs; validate() turns
/// those into a report instead of throwing.
struct GraphData {
  int vertex_count = 0;
  std::vector<Edge> entries;
  std::vector<double> measure;
  std::vector<std::string> labels;  // optional, I/O only
};

struct ValidationIssue {
  enum class Kind {
    kIndexOutOfRange,
    kSelfLoop,
    kNonpositiveWeight,
    kSymmetryViolation,
    kDuplicatePair,
    kNonpositiveMeasure,
    kMeasureLengthMismatch,
    kIsolatedVertex,  // note, not an error: isolated vertices are legal
  };
  Kind kind;
  std::string message;
  bool is_error() const { return kind != Kind::kIsolatedVertex; }
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const {
    for (const auto& i : issues)
      if (i.is_error()) return false;
    return true;
  }
  int error_count() const {
    int c = 0;
    for (const auto& i : issues) c += i.is_error() ? 1 : 0;
    return c;
  }
};

ValidationReport validate(const GraphData& data);

/// Finite weighted graph over a measure space: symmetric edge weight b with
/// zero diagonal and a strictly positive vertex measure m. Immutable after
/// construction; weighted degrees are cached.
class WeightedGraph {
 public:
  /// Builds from raw data, throwing std::invalid_argument if validate()
  /// reports an error. Asymmetric duplicate orientations are rejected, not
  /// averaged.
  static WeightedGraph build(const GraphData& data);

  /// Convenience constructor for trusted inputs; edges may be given in any
  /// orientation and are normalized to u < v. Throws on invariant violation.
  WeightedGraph(int vertex_count, std::vector<Edge> edges,
                std::vector<double> measure,
                std::vector<std::string> labels = {});

  int vertex_count() const { return n_; }
  double measure(int u) const { return measure_[static_cast<size_t>(u)]; }
  const std::vector<double>& measures() const { return measure_; }

  /// b(u,v); zero when no edge is stored.
  double edge_weight(int u, int v) const;

  /// deg(u) = sum_v b(u,v), cached.
  double weighted_degree(int u) const { return degree_[static_cast<size_t>(u)]; }

  /// Combinatorial neighbor count N(u).
  int neighbor_count(int u) const {
    return static_cast<int>(adjacency_[static_cast<size_t>(u)].size());
  }

  /// Neighbors of u with edge weights, sorted by vertex index.
  std::span<const std::pair<int, double>> neighbors(int u) const {
    return adjacency_[static_cast<size_t>(u)];
  }

  const std::vector<Edge>& edges() const { return edges_; }

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(int u) const;

  GraphData to_data() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;  // u < v, b > 0
  std::vector<double> measure_;
  std::vector<std::string> labels_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
  std::vector<double> degree_;
};

/// Connected components of the relation x ~ y <=> b(x,y) > 0.
struct ComponentStructure {
  std::vector<int> component_id;  // per vertex, 0-based, BFS discovery order
  int component_count = 0;
  bool connected() const { return component_count <= 1; }
  std::vector<std::vector<int>> members() const;
};

ComponentStructure components(const WeightedGraph& graph);

/// Truncation to {1..N} of the complete graph with b(i,j) = 1/(i^2+j^2) and
/// m(i) = 1/i^3 (1-based indices; vertex k holds label "k+1"... vertex 0 is
/// "1"). The infinite graph carries no nontrivial intrinsic pseudo metric.
WeightedGraph make_no_intrinsic_example(int N);

/// Star graph with center at index 0 and leaves 1..L.
WeightedGraph make_star(const std::vector<double>& leaf_measures,
                        double center_measure,
                        const std::vector<double>& edge_weights);

}  // namespace gim

#endif  // GIM_WEIGHTED_GRAPH_HPP
