#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qh/domains.hpp"
#include "qh/normed_space.hpp"

namespace qh::cli {

/// Planar rendering with layers "domain", "punctures" and "path". Throws DimensionError
/// unless the domain is two-dimensional.
std::string render_svg(const Domain& domain, const std::vector<Polyline>& paths,
                       const std::vector<Vector>& markers = {});

/// Log-log scatter of (x, y) pairs with layer "samples"; nonpositive values are dropped.
std::string render_scatter(const std::vector<std::pair<double, double>>& points, const std::string& x_label,
                           const std::string& y_label);

}  // namespace qh::cli
