#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qh/error.hpp"

namespace qh::cli {

namespace {

constexpr double kSize = 800.0;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

struct View {
  double x0, y0, span;
  double px(double x) const { return (x - x0) / span * kSize; }
  double py(double y) const { return kSize - (y - y0) / span * kSize; }
};

}  // namespace

std::string render_svg(const Domain& domain, const std::vector<Polyline>& paths, const std::vector<Vector>& markers) {
  if (domain.dim() != 2) throw DimensionError("SVG output needs a two-dimensional domain");
  const NormSpec& space = domain.space();

  double x0 = kInf, y0 = kInf, x1 = -kInf, y1 = -kInf;
  auto grow = [&](double x, double y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  };
  std::vector<Vector> outline;
  if (const auto* ball = std::get_if<Ball>(&domain.base())) {
    const PlaneBasis plane = PlaneBasis::standard(2);
    for (int k = 0; k < 256; ++k) {
      outline.push_back(sphere_circle_point(space, ball->center, ball->radius, plane, 2.0 * std::numbers::pi * k / 256));
      grow(outline.back()[0], outline.back()[1]);
    }
  }
  for (const Vector& p : domain.punctures().points) grow(p[0], p[1]);
  for (const Polyline& path : paths) {
    for (const Vector& v : path.vertices()) grow(v[0], v[1]);
  }
  for (const Vector& m : markers) grow(m[0], m[1]);
  if (const auto* half = std::get_if<HalfSpace>(&domain.base()); half && !markers.empty()) {
    const double a0 = half->normal[0], a1 = half->normal[1];
    const double nn = a0 * a0 + a1 * a1;
    for (const Vector& m : markers) {
      const double s = (a0 * m[0] + a1 * m[1] - half->offset) / nn;
      grow(m[0] - s * a0, m[1] - s * a1);
    }
  }
  if (!(x0 < kInf)) {
    x0 = y0 = -1.0;
    x1 = y1 = 1.0;
  }
  double span = std::max(x1 - x0, y1 - y0);
  if (!(span > 0.0)) span = 1.0;
  const double pad = 0.08 * span;
  const View view{x0 - pad, y0 - pad, span + 2.0 * pad};

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  out << "<g id=\"domain\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"2\">\n";
  if (!outline.empty()) {
    out << "<polygon points=\"";
    for (const Vector& v : outline) out << fmt(view.px(v[0])) << ',' << fmt(view.py(v[1])) << ' ';
    out << "\"/>\n";
  } else if (const auto* half = std::get_if<HalfSpace>(&domain.base())) {
    // Boundary line a . x = b clipped to the view square.
    const double a0 = half->normal[0], a1 = half->normal[1], b = half->offset;
    const double vx0 = view.x0, vx1 = view.x0 + view.span, vy0 = view.y0, vy1 = view.y0 + view.span;
    std::vector<std::pair<double, double>> hits;
    if (a1 != 0.0) {
      for (double x : {vx0, vx1}) {
        const double y = (b - a0 * x) / a1;
        if (y >= vy0 && y <= vy1) hits.emplace_back(x, y);
      }
    }
    if (a0 != 0.0) {
      for (double y : {vy0, vy1}) {
        const double x = (b - a1 * y) / a0;
        if (x >= vx0 && x <= vx1) hits.emplace_back(x, y);
      }
    }
    if (hits.size() >= 2) {
      out << "<line x1=\"" << fmt(view.px(hits[0].first)) << "\" y1=\"" << fmt(view.py(hits[0].second))
          << "\" x2=\"" << fmt(view.px(hits[1].first)) << "\" y2=\"" << fmt(view.py(hits[1].second)) << "\"/>\n";
    }
  }
  out << "</g>\n";

  out << "<g id=\"punctures\" fill=\"#c00000\">\n";
  for (const Vector& p : domain.punctures().points) {
    out << "<circle cx=\"" << fmt(view.px(p[0])) << "\" cy=\"" << fmt(view.py(p[1])) << "\" r=\"3\"/>\n";
  }
  out << "</g>\n";

  out << "<g id=\"path\" fill=\"none\" stroke=\"#2e7d32\" stroke-width=\"1.5\">\n";
  for (const Polyline& path : paths) {
    out << "<polyline points=\"";
    for (const Vector& v : path.vertices()) out << fmt(view.px(v[0])) << ',' << fmt(view.py(v[1])) << ' ';
    out << "\"/>\n";
  }
  for (const Vector& m : markers) {
    out << "<circle cx=\"" << fmt(view.px(m[0])) << "\" cy=\"" << fmt(view.py(m[1])) << "\" r=\"4\" fill=\"#2e7d32\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string render_scatter(const std::vector<std::pair<double, double>>& points, const std::string& x_label,
                           const std::string& y_label) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, y] : points) {
    if (x > 0.0 && y > 0.0 && std::isfinite(x) && std::isfinite(y)) logs.emplace_back(std::log10(x), std::log10(y));
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!logs.empty()) {
    x0 = x1 = logs[0].first;
    y0 = y1 = logs[0].second;
    for (const auto& [x, y] : logs) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  const double sx = std::max(x1 - x0, 1e-9), sy = std::max(y1 - y0, 1e-9);
  const double margin = 60.0, inner = kSize - 2.0 * margin;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g id=\"axes\" stroke=\"black\" font-family=\"sans-serif\" font-size=\"14\">\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << kSize - margin << "\" x2=\"" << kSize - margin << "\" y2=\""
      << kSize - margin << "\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << kSize - margin
      << "\"/>\n";
  out << "<text x=\"" << kSize / 2 << "\" y=\"" << kSize - 20 << "\" stroke=\"none\">log10 " << x_label << "</text>\n";
  out << "<text x=\"10\" y=\"" << margin - 20 << "\" stroke=\"none\">log10 " << y_label << "</text>\n";
  out << "</g>\n<g id=\"samples\" fill=\"#1f4e79\">\n";
  for (const auto& [x, y] : logs) {
    out << "<circle cx=\"" << fmt(margin + (x - x0) / sx * inner) << "\" cy=\""
        << fmt(kSize - margin - (y - y0) / sy * inner) << "\" r=\"2\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace qh::cli
