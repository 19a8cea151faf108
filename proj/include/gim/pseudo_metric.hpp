#ifndef GIM_PSEUDO_METRIC_HPP
#define GIM_PSEUDO_METRIC_HPP

#include <limits>
#include <optional>
#include <vector>

namespace gim {

constexpr double kInfDistance = std::numeric_limits<double>::infinity();

struct TriangleViolation {
  int x, y, z;       // sigma(x,z) > sigma(x,y) + sigma(y,z) + tau
  double violation;  // positive excess
};

/// Symmetric nonnegative pairwise table with zero diagonal, stored as the
/// strict upper triangle. Entries may be the infinity sentinel (only
/// meaningful across graph components). The triangle inequality is not
/// enforced on mutation; check_triangles() verifies it exhaustively.
class PseudoMetric {
 public:
  explicit PseudoMetric(int n);

  int size() const { return n_; }

  double operator()(int i, int j) const {
    if (i == j) return 0.0;
    return tri_[index(i, j)];
  }

  void set(int i, int j, double value);

  /// O(n^3) exhaustive triangle check; returns the worst violating triple,
  /// or nullopt when none exceeds tau_tri.
  std::optional<TriangleViolation> check_triangles(double tau_tri = 1e-9) const;

  bool has_infinite_entry() const;

  /// Largest finite entry (0 for the zero metric).
  double max_finite_entry() const;

  /// Replaces each entry by the shortest-path closure over the table
  /// (min-plus). Restores the triangle inequality after entry increases.
  void close_triangles();

  PseudoMetric scaled(double factor) const;

  const std::vector<double>& upper_triangle() const { return tri_; }

 private:
  size_t index(int i, int j) const;
  int n_;
  std::vector<double> tri_;
};

/// Entrywise maximum; a pseudo metric again (max of pseudo metrics).
PseudoMetric max_combine(const PseudoMetric& a, const PseudoMetric& b);

/// Entrywise convex combination t*a + (1-t)*b.
PseudoMetric blend(const PseudoMetric& a, const PseudoMetric& b, double t);

/// max |a - b| over pairs, treating inf==inf as 0.
double max_abs_difference(const PseudoMetric& a, const PseudoMetric& b);

/// a(i,j) <= b(i,j) + slack for every pair.
bool dominated_by(const PseudoMetric& a, const PseudoMetric& b, double slack);

}  // namespace gim

#endif  // GIM_PSEUDO_METRIC_HPP
