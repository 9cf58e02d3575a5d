#include <algorithm>
#include <cmath>
#include <numbers>

#include "qh/analysis.hpp"
#include "qh/error.hpp"
#include "qh/parallel.hpp"

namespace qh {

namespace {

constexpr double kOuterFactor = 21.0 / 20.0;

// Uniform bucket grid over the bounding box of a planar point set.
class BucketGrid {
 public:
  BucketGrid(const std::vector<Vector>& pts, double cell) : pts_(pts), cell_(cell) {
    x0_ = y0_ = kInf;
    double x1 = -kInf;
    double y1 = -kInf;
    for (const Vector& p : pts) {
      x0_ = std::min(x0_, p[0]);
      y0_ = std::min(y0_, p[1]);
      x1 = std::max(x1, p[0]);
      y1 = std::max(y1, p[1]);
    }
    nx_ = static_cast<long>(std::floor((x1 - x0_) / cell)) + 1;
    ny_ = static_cast<long>(std::floor((y1 - y0_) / cell)) + 1;
    start_.assign(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
    std::vector<std::size_t> cell_of(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of[i] = index(cell_x(pts[i][0]), cell_y(pts[i][1]));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t k = 1; k < start_.size(); ++k) start_[k] += start_[k - 1];
    items_.resize(pts.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) items_[fill[cell_of[i]]++] = i;
  }

  /// Exact nearest distance when it is at most one cell width; otherwise some value > cell.
  double nearest_within_cell(double x, double y) const {
    const long cx = cell_x(x);
    const long cy = cell_y(y);
    double best = kInf;
    for (long ix = cx - 1; ix <= cx + 1; ++ix) {
      if (ix < 0 || ix >= nx_) continue;
      for (long iy = cy - 1; iy <= cy + 1; ++iy) {
        if (iy < 0 || iy >= ny_) continue;
        const std::size_t c = index(ix, iy);
        for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
          const Vector& p = pts_[items_[k]];
          best = std::min(best, std::hypot(p[0] - x, p[1] - y));
        }
      }
    }
    return best;
  }

 private:
  long cell_x(double x) const { return static_cast<long>(std::floor((x - x0_) / cell_)); }
  long cell_y(double y) const { return static_cast<long>(std::floor((y - y0_) / cell_)); }
  std::size_t index(long ix, long iy) const { return static_cast<std::size_t>(ix * ny_ + iy); }

  const std::vector<Vector>& pts_;
  double cell_;
  double x0_, y0_;
  long nx_ = 0, ny_ = 0;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

double nearest_brute(const std::vector<Vector>& pts, const Vector& z) {
  double best = kInf;
  for (const Vector& p : pts) best = std::min(best, std::hypot(p[0] - z[0], p[1] - z[1]));
  return best;
}

void check_params(double r, int j, double probe_density) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("annulus radius must be positive");
  if (j < 10) throw InvalidArgument("net index j must be at least 10");
  if (!(probe_density >= 20.0)) throw InvalidArgument("probe density must be at least 20");
}

}  // namespace

void countnonpsi_verify(CountNonPsiInstance& inst, double probe_density) {
  check_params(inst.r, inst.j, probe_density);
  inst.covering_verified = false;
  inst.covering_sup = kInf;
  inst.probes = 0;
  const auto& pts = inst.net.points;
  for (const Vector& p : pts) {
    if (p.dim() != 2) throw DimensionError("annular nets are planar");
  }
  if (pts.empty()) return;

  const double r = inst.r;
  const double r_out = kOuterFactor * r;
  const double target = r / (20.0 * inst.j);
  const double h = r / (probe_density * inst.j);
  const BucketGrid grid(pts, target);

  // Lattice points hi, hk with r - h <= |p| <= r_out + h cover the annulus within h / sqrt 2.
  const double lo = r - h;
  const double hi = r_out + h;
  const long kmax = static_cast<long>(std::ceil(hi / h));
  const std::size_t rows = static_cast<std::size_t>(2 * kmax + 1);
  std::vector<double> row_max(rows, 0.0);
  std::vector<std::size_t> row_count(rows, 0);
  parallel_for(rows, [&](std::size_t row) {
    const double y = static_cast<double>(static_cast<long>(row) - kmax) * h;
    const double x_hi = std::sqrt(std::max(0.0, hi * hi - y * y));
    const double x_lo = std::abs(y) < lo ? std::sqrt(lo * lo - y * y) : 0.0;
    const long i_hi = static_cast<long>(std::floor(x_hi / h));
    const long i_lo = static_cast<long>(std::ceil(x_lo / h));
    double worst = 0.0;
    std::size_t count = 0;
    for (long i = -i_hi; i <= i_hi; ++i) {
      if (std::abs(i) < i_lo) i = i_lo;
      const double x = static_cast<double>(i) * h;
      const double rad = std::hypot(x, y);
      if (rad < lo || rad > hi) continue;
      worst = std::max(worst, grid.nearest_within_cell(x, y));
      ++count;
    }
    row_max[row] = worst;
    row_count[row] = count;
  });
  double worst = 0.0;
  for (std::size_t k = 0; k < rows; ++k) {
    worst = std::max(worst, row_max[k]);
    inst.probes += row_count[k];
  }
  const double sup = worst + h / std::numbers::sqrt2;
  inst.covering_verified = sup < target;
  inst.covering_sup = inst.covering_verified ? sup : kInf;
  inst.k_lower_bound = inst.covering_verified ? (r / 20.0) / sup : 0.0;
}

CountNonPsiInstance countnonpsi_build(double r, int j, double probe_density) {
  check_params(r, j, probe_density);
  CountNonPsiInstance inst;
  inst.r = r;
  inst.j = j;
  inst.a = Vector{1.1 * r, 0.0};
  inst.b = Vector{0.9 * r, 0.0};

  const double rho = 0.8 * r / (20.0 * j);
  const double spacing = rho * std::numbers::sqrt2;
  const double width = r / 20.0;
  const double r_out = kOuterFactor * r;
  const auto rings = static_cast<std::size_t>(std::ceil(width / spacing));
  const auto per_ring = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi * r_out / spacing));
  inst.net.kappa = 0.5;
  inst.net.points.reserve(rings * per_ring);
  for (std::size_t k = 0; k < rings; ++k) {
    const double rad = r + (static_cast<double>(k) + 0.5) * width / static_cast<double>(rings);
    for (std::size_t m = 0; m < per_ring; ++m) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(per_ring);
      inst.net.points.push_back(Vector{rad * std::cos(theta), rad * std::sin(theta)});
    }
  }
  countnonpsi_verify(inst, probe_density);
  if (!inst.covering_verified) throw CoveringError("annular net failed its covering verification");
  return inst;
}

double countnonpsi_lower_bound(const CountNonPsiInstance& inst) {
  if (!inst.covering_verified) throw CoveringError("covering not verified for this net");
  return (inst.r / 20.0) / inst.covering_sup;
}

std::vector<CountNonPsiRow> countnonpsi_aggregate(int j_min, int j_max, double probe_density) {
  if (!(10 <= j_min && j_min <= j_max && j_max <= 14)) {
    throw InvalidArgument("net indices must satisfy 10 <= jmin <= jmax <= 14");
  }
  std::vector<CountNonPsiInstance> insts;
  for (int j = j_min; j <= j_max; ++j) insts.push_back(countnonpsi_build(std::ldexp(1.0, -j), j, probe_density));

  // d_G in the unit disk minus the union of the nets and the origin.
  auto d_g = [&](const Vector& z) {
    const double rad = std::hypot(z[0], z[1]);
    double d = std::min(1.0 - rad, rad);
    for (const CountNonPsiInstance& inst : insts) d = std::min(d, nearest_brute(inst.net.points, z));
    return d;
  };
  std::vector<CountNonPsiRow> rows;
  for (const CountNonPsiInstance& inst : insts) {
    CountNonPsiRow row;
    row.j = inst.j;
    row.r = inst.r;
    row.net_size = inst.net.size();
    row.covering_verified = inst.covering_verified;
    row.covering_sup = inst.covering_sup;
    const double dist = std::hypot(inst.a[0] - inst.b[0], inst.a[1] - inst.b[1]);
    row.t = dist / std::min(d_g(inst.a), d_g(inst.b));
    row.k_lower_bound = countnonpsi_lower_bound(inst);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qh
