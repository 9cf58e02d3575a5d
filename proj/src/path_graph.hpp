#pragma once

// Multiscale sampling graph used by k_bracket to find short certified paths.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qh/domains.hpp"
#include "qh/qh_metric.hpp"

namespace qh::detail {

/// Static k-d tree over a flat coordinate array; answers axis-aligned box queries.
class KdTree {
 public:
  KdTree(const std::vector<double>& flat, std::size_t dim);
  /// Indices of points with |x_k - center_k| <= half_width for all k, ascending.
  void query_box(const double* center, double half_width, std::vector<int>& out) const;

 private:
  void build(int lo, int hi, int depth);
  void query(int lo, int hi, int depth, const double* c, double r, std::vector<int>& out) const;
  bool in_box(int idx, const double* c, double r) const;

  const std::vector<double>& flat_;
  std::size_t dim_;
  std::vector<int> idx_;
};

/// Nodes: both endpoints, leaves of a 2^n-tree refined to a local scale proportional to
/// max(d(c), floor(c)), boundary-offset nodes, and norm-circle rings around punctures.
/// Edges join nodes within a multiple of their scale whose segment certifies inside.
class PathGraph {
 public:
  /// `domain` must already be localized to the ball returned by region().
  PathGraph(const Domain& domain, const Vector& a, const Vector& b, const GraphParams& params);

  static std::pair<Vector, double> region(const Vector& a, double da, const Vector& b, double db,
                                          double separation);

  /// Node indices from a (node 0) to b (node 1), or nullopt when disconnected.
  std::optional<std::vector<int>> shortest_path() const;
  /// Path weight under the graph's low-order edge quadrature.
  double path_weight(const std::vector<int>& path) const;

  /// Adds nodes in a shrinking tube around the path and connects them.
  void refine(const std::vector<int>& path, int round);

  Polyline to_polyline(const std::vector<int>& path) const;
  std::size_t node_count() const noexcept { return scale_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }

 private:
  Vector node(int i) const;
  const double* coords(int i) const { return flat_.data() + static_cast<std::size_t>(i) * dim_; }
  bool add_node(const double* p, double scale);
  double floor_scale(const double* c) const;
  void sample_tree();
  std::size_t count_leaves(double eta) const;
  void connect(std::size_t first_new);
  void try_edge(int i, int j);
  double edge_weight(int i, int j) const;

  const Domain& domain_;
  std::size_t dim_;
  Vector a_;
  Vector b_;
  double da_;
  double db_;
  Vector center_;
  double radius_;
  GraphParams params_;
  double eta_;

  std::vector<double> flat_;
  std::vector<double> scale_;
  std::vector<double> clear_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::size_t edges_ = 0;
  mutable std::vector<double> scratch_;
};

}  // namespace qh::detail
