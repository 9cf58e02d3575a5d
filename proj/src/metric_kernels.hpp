#pragma once

#include <vector>

#include "qh/domains.hpp"
#include "qh/qh_metric.hpp"

namespace qh::detail {

/// Certified containment of [a, b] in the domain (see qh::segment_inside).
bool segment_inside(const Domain& domain, const double* a, const double* b, std::vector<double>& scratch);

/// Quasihyperbolic length of one certified edge by adaptive Simpson halving.
QhLength edge_qh_length(const Domain& domain, const double* a, const double* b, const QuadratureParams& quad,
                        std::vector<double>& scratch);

/// Three-point Gauss-Legendre estimate of the edge length; guidance weight for graph search.
double edge_qh_estimate(const Domain& domain, const double* a, const double* b, std::vector<double>& scratch);

}  // namespace qh::detail
