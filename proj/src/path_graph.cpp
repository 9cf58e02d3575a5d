#include "path_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>

#include "metric_kernels.hpp"
#include "qh/random.hpp"

namespace qh::detail {

namespace {

constexpr double kInitialEta = 0.35;     // cell width / local clearance
constexpr double kFloorFactor = 0.3;     // resolution floor relative to endpoint distance
constexpr double kEdgeReach = 2.6;       // edge length / smaller node scale
constexpr double kMinNodeClearance = 0.05;
constexpr int kMaxTreeDepth = 48;
constexpr int kTubeSamples = 12;

struct RingPoint {
  Vector pos;
  double scale;
};

}  // namespace

KdTree::KdTree(const std::vector<double>& flat, std::size_t dim) : flat_(flat), dim_(dim) {
  idx_.resize(flat.size() / dim);
  for (std::size_t i = 0; i < idx_.size(); ++i) idx_[i] = static_cast<int>(i);
  build(0, static_cast<int>(idx_.size()), 0);
}

void KdTree::build(int lo, int hi, int depth) {
  if (hi - lo <= 8) return;
  const std::size_t axis = static_cast<std::size_t>(depth) % dim_;
  const int mid = lo + (hi - lo) / 2;
  std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi, [&](int x, int y) {
    const double ax = flat_[static_cast<std::size_t>(x) * dim_ + axis];
    const double ay = flat_[static_cast<std::size_t>(y) * dim_ + axis];
    return ax < ay || (ax == ay && x < y);
  });
  build(lo, mid, depth + 1);
  build(mid + 1, hi, depth + 1);
}

bool KdTree::in_box(int idx, const double* c, double r) const {
  const double* p = flat_.data() + static_cast<std::size_t>(idx) * dim_;
  for (std::size_t k = 0; k < dim_; ++k) {
    if (std::abs(p[k] - c[k]) > r) return false;
  }
  return true;
}

void KdTree::query(int lo, int hi, int depth, const double* c, double r, std::vector<int>& out) const {
  if (hi - lo <= 8) {
    for (int k = lo; k < hi; ++k) {
      if (in_box(idx_[static_cast<std::size_t>(k)], c, r)) out.push_back(idx_[static_cast<std::size_t>(k)]);
    }
    return;
  }
  const std::size_t axis = static_cast<std::size_t>(depth) % dim_;
  const int mid = lo + (hi - lo) / 2;
  const int split_idx = idx_[static_cast<std::size_t>(mid)];
  const double split = flat_[static_cast<std::size_t>(split_idx) * dim_ + axis];
  if (in_box(split_idx, c, r)) out.push_back(split_idx);
  if (c[axis] - r <= split) query(lo, mid, depth + 1, c, r, out);
  if (c[axis] + r >= split) query(mid + 1, hi, depth + 1, c, r, out);
}

void KdTree::query_box(const double* center, double half_width, std::vector<int>& out) const {
  out.clear();
  query(0, static_cast<int>(idx_.size()), 0, center, half_width, out);
  std::sort(out.begin(), out.end());
}

std::pair<Vector, double> PathGraph::region(const Vector& a, double da, const Vector& b, double db,
                                            double separation) {
  Vector center = 0.5 * (a + b);
  return {std::move(center), 0.6 * separation + 0.5 * std::max(da, db)};
}

PathGraph::PathGraph(const Domain& domain, const Vector& a, const Vector& b, const GraphParams& params)
    : domain_(domain),
      dim_(domain.dim()),
      a_(a),
      b_(b),
      da_(domain.clearance(a)),
      db_(domain.clearance(b)),
      params_(params),
      eta_(kInitialEta) {
  auto [center, radius] = region(a, da_, b, db_, distance(domain.space(), a, b));
  center_ = std::move(center);
  radius_ = radius;
  scratch_.resize(dim_);

  // Endpoints are nodes 0 and 1 regardless of region tests.
  flat_.insert(flat_.end(), a_.data(), a_.data() + dim_);
  flat_.insert(flat_.end(), b_.data(), b_.data() + dim_);
  clear_ = {da_, db_};
  scale_ = {0.0, 0.0};

  sample_tree();
  connect(0);
}

double PathGraph::floor_scale(const double* c) const {
  const NormSpec& space = domain_.space();
  const double ra = std::max(da_, space.distance_of(c, a_.data()));
  const double rb = std::max(db_, space.distance_of(c, b_.data()));
  return kFloorFactor * std::min(ra, rb);
}

bool PathGraph::add_node(const double* p, double scale) {
  const std::span<const double> pos(p, dim_);
  if (!(domain_.space().distance_of(p, center_.data()) < radius_)) return false;
  const double c = domain_.clearance(pos);
  if (!(c > kMinNodeClearance * scale)) return false;
  flat_.insert(flat_.end(), p, p + dim_);
  scale_.push_back(scale);
  clear_.push_back(c);
  return true;
}

namespace {

// Depth-first walk over the cubes of the adaptive tree; calls leaf(center, half) for every
// leaf cell that may meet the sampling region and the base domain.
template <class Leaf>
void walk_cells(const Domain& domain, const Vector& center, double radius, double eta,
                const std::function<double(const double*)>& floor_scale, Leaf&& leaf) {
  const std::size_t n = domain.dim();
  const NormSpec& space = domain.space();
  const double cube_radius = space.is_max() ? 1.0 : std::pow(static_cast<double>(n), 1.0 / space.p());
  const std::size_t children = std::size_t{1} << n;

  std::vector<double> centers(center.data(), center.data() + n);
  std::vector<double> halves{radius};
  std::vector<int> depths{0};
  std::vector<double> child(n);
  while (!halves.empty()) {
    const double half = halves.back();
    const int depth = depths.back();
    std::vector<double> c(centers.end() - static_cast<std::ptrdiff_t>(n), centers.end());
    centers.resize(centers.size() - n);
    halves.pop_back();
    depths.pop_back();

    const double reach = half * cube_radius;
    const std::span<const double> cs(c.data(), n);
    if (domain.base_clearance(cs) <= -reach) continue;
    if (space.distance_of(c.data(), center.data()) - reach >= radius) continue;
    const double target = eta * std::max(domain.clearance(cs), floor_scale(c.data()));
    if (2.0 * half <= target || depth >= kMaxTreeDepth) {
      if (!leaf(c.data(), half)) return;
      continue;
    }
    const double q = 0.5 * half;
    for (std::size_t k = children; k-- > 0;) {
      for (std::size_t d = 0; d < n; ++d) child[d] = c[d] + (((k >> d) & 1U) ? q : -q);
      centers.insert(centers.end(), child.begin(), child.end());
      halves.push_back(q);
      depths.push_back(depth + 1);
    }
  }
}

PlaneBasis ring_plane(const Vector& x, const Vector& a, const Vector& b) {
  const std::size_t n = x.dim();
  if (n == 2) return PlaneBasis::standard(2);
  Vector u = a - x;
  Vector v = b - x;
  const double uu = dot(u, u);
  if (uu > 0.0) {
    u *= 1.0 / std::sqrt(uu);
    v -= u * dot(u, v);
    const double vv = dot(v, v);
    if (vv > 1e-20 * dot(b - x, b - x) && vv > 0.0) return {u, v * (1.0 / std::sqrt(vv))};
  }
  return PlaneBasis::standard(n);
}

}  // namespace

std::size_t PathGraph::count_leaves(double eta) const {
  std::size_t count = 0;
  const std::size_t cap = params_.node_budget * 4;
  walk_cells(domain_, center_, radius_, eta, [this](const double* c) { return floor_scale(c); },
             [&](const double*, double) { return ++count < cap; });
  return count;
}

void PathGraph::sample_tree() {
  const std::size_t budget = params_.node_budget;
  std::vector<RingPoint> rings;
  const std::size_t ring_cap = budget / 2;

  // Rings at geometric radii around each relevant puncture, plus a ring through each
  // endpoint that sits close to its nearest puncture.
  const auto& points = domain_.punctures().points;
  const NormSpec& space = domain_.space();
  const int per_ring = params_.ring_points;
  for (std::size_t i = 0; i < points.size() && rings.size() < ring_cap; ++i) {
    const Vector& x = points[i];
    const double to_center = distance(space, x, center_);
    double local = domain_.base_clearance(x.coords());
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i) local = std::min(local, distance(space, x, points[j]));
    }
    const PlaneBasis plane = ring_plane(x, a_, b_);
    const double floor_here = floor_scale(x.data());
    double radius = local;
    for (int k = 1; k <= params_.ring_levels; ++k) {
      radius *= 0.5;
      if (radius < 0.5 * floor_here) break;
      if (to_center - radius >= radius_) continue;
      const double phase = (k % 2) * std::numbers::pi / per_ring;
      for (int m = 0; m < per_ring; ++m) {
        const double theta = phase + 2.0 * std::numbers::pi * m / per_ring;
        rings.push_back({sphere_circle_point(space, x, radius, plane, theta), 0.5 * radius});
      }
    }
    for (const Vector* e : {&a_, &b_}) {
      const PunctureHit hit = domain_.nearest_puncture(e->coords());
      if (hit.index != i || !(hit.distance < 0.5 * local)) continue;
      const Vector rel = *e - x;
      const double theta0 = std::atan2(dot(rel, plane.b2()), dot(rel, plane.b1()));
      for (int m = 1; m < per_ring; ++m) {
        const double theta = theta0 + 2.0 * std::numbers::pi * m / per_ring;
        rings.push_back({sphere_circle_point(space, x, hit.distance, plane, theta), 0.5 * hit.distance});
      }
    }
  }
  if (rings.size() > ring_cap) rings.resize(ring_cap);

  const std::size_t tree_cap = budget > 2 + rings.size() ? budget - 2 - rings.size() : 0;
  while (count_leaves(eta_) > tree_cap && eta_ < 64.0) eta_ *= 1.25;

  scale_[0] = eta_ * da_;
  scale_[1] = eta_ * db_;
  for (const RingPoint& r : rings) add_node(r.pos.data(), r.scale);

  if (tree_cap == 0) return;
  const HaltonSequence halton(dim_, params_.seed);
  std::vector<double> jitter(dim_);
  std::vector<double> p(dim_);
  std::uint64_t leaf_index = 0;
  std::size_t added = 0;
  walk_cells(domain_, center_, radius_, eta_, [this](const double* c) { return floor_scale(c); },
             [&](const double* c, double half) {
               const double width = 2.0 * half;
               halton.point(leaf_index++, jitter.data());
               for (std::size_t d = 0; d < dim_; ++d) p[d] = c[d] + (jitter[d] - 0.5) * half;
               bool ok = add_node(p.data(), width) || add_node(c, width);
               if (!ok && domain_.base_clearance(std::span<const double>(c, dim_)) < width) {
                 const Vector cv{std::span<const double>(c, dim_)};
                 if (auto q = domain_.inward_offset(cv, 0.5 * width)) {
                   if (space.distance_of(q->data(), c) <= 2.0 * width) ok = add_node(q->data(), width);
                 }
               }
               if (ok) ++added;
               return added < tree_cap;
             });
}

void PathGraph::connect(std::size_t first_new) {
  const std::size_t n = scale_.size();
  adj_.resize(n);
  const KdTree tree(flat_, dim_);
  std::vector<int> found;
  for (std::size_t i = first_new; i < n; ++i) {
    const double reach = kEdgeReach * std::max(scale_[i], 1e-300);
    tree.query_box(coords(static_cast<int>(i)), reach, found);
    for (int j : found) {
      const auto ju = static_cast<std::size_t>(j);
      if (ju == i || (ju >= first_new && ju < i)) continue;
      try_edge(static_cast<int>(i), j);
    }
  }
}

void PathGraph::try_edge(int i, int j) {
  const auto iu = static_cast<std::size_t>(i);
  const auto ju = static_cast<std::size_t>(j);
  const double len = domain_.space().distance_of(coords(i), coords(j));
  if (len == 0.0) return;
  // Endpoints carry scale 0 only before sample_tree sets them; treat them like any node.
  const double reach = kEdgeReach * std::min(scale_[iu], scale_[ju]);
  if (len > reach) return;
  const bool inside = len < std::max(clear_[iu], clear_[ju]) || segment_inside(domain_, coords(i), coords(j), scratch_);
  if (!inside) return;
  const double w = edge_weight(i, j);
  if (!std::isfinite(w)) return;
  adj_[iu].emplace_back(j, w);
  adj_[ju].emplace_back(i, w);
  ++edges_;
}

double PathGraph::edge_weight(int i, int j) const {
  return edge_qh_estimate(domain_, coords(i), coords(j), scratch_);
}

std::optional<std::vector<int>> PathGraph::shortest_path() const {
  const std::size_t n = scale_.size();
  std::vector<double> dist(n, kInf);
  std::vector<int> prev(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[0] = 0.0;
  heap.emplace(0.0, 0);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    const auto uu = static_cast<std::size_t>(u);
    if (d > dist[uu]) continue;
    if (u == 1) break;
    for (const auto& [v, w] : adj_[uu]) {
      const double nd = d + w;
      const auto vu = static_cast<std::size_t>(v);
      if (nd < dist[vu]) {
        dist[vu] = nd;
        prev[vu] = u;
        heap.emplace(nd, v);
      }
    }
  }
  if (!std::isfinite(dist[1])) return std::nullopt;
  std::vector<int> path;
  for (int v = 1; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

double PathGraph::path_weight(const std::vector<int>& path) const {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) total += edge_weight(path[k], path[k + 1]);
  return total;
}

void PathGraph::refine(const std::vector<int>& path, int round) {
  const std::size_t first_new = scale_.size();
  struct Site {
    Vector pos;
    double scale;
  };
  std::vector<Site> sites;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto u = static_cast<std::size_t>(path[k]);
    sites.push_back({node(path[k]), scale_[u]});
    if (k + 1 < path.size()) {
      const auto v = static_cast<std::size_t>(path[k + 1]);
      sites.push_back({0.5 * (node(path[k]) + node(path[k + 1])), std::min(scale_[u], scale_[v])});
    }
  }
  const std::size_t round_budget = std::max<std::size_t>(params_.node_budget / 4, 1);
  const std::size_t per_site =
      std::clamp<std::size_t>(round_budget / std::max<std::size_t>(sites.size(), 1), 2, kTubeSamples);
  const double shrink = 0.6 * std::pow(0.6, round);

  const HaltonSequence halton(dim_, derive_seed(params_.seed, static_cast<std::uint64_t>(round) + 1));
  std::uint64_t index = 0;
  std::vector<double> u(dim_);
  std::vector<double> p(dim_);
  std::size_t added = 0;
  for (const Site& site : sites) {
    const double radius = shrink * site.scale;
    std::size_t accepted = 0;
    for (std::size_t attempt = 0; attempt < 4 * per_site && accepted < per_site; ++attempt) {
      halton.point(index++, u.data());
      double sq = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) {
        u[d] = 2.0 * u[d] - 1.0;
        sq += u[d] * u[d];
      }
      if (sq > 1.0) continue;
      ++accepted;
      for (std::size_t d = 0; d < dim_; ++d) p[d] = site.pos[d] + radius * u[d];
      if (add_node(p.data(), radius) && ++added >= round_budget) break;
    }
    if (added >= round_budget) break;
  }
  connect(first_new);
}

Vector PathGraph::node(int i) const { return Vector(std::span<const double>(coords(i), dim_)); }

Polyline PathGraph::to_polyline(const std::vector<int>& path) const {
  std::vector<Vector> pts;
  pts.reserve(path.size());
  for (int i : path) pts.push_back(node(i));
  return Polyline(std::move(pts));
}

}  // namespace qh::detail
