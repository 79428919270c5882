#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cconv/cost.hpp"
#include "cconv/grid.hpp"

namespace cconv {

/// Values of a transform on the opposite grid, with the lowest-index optimizer
/// of every output point.
struct TransformResult {
  GridFunction values;
  std::vector<std::size_t> argmax;
};

/// f^c(y) = max over grid x of c(x, y) - f(x); +inf samples of f are skipped.
TransformResult c_transform(const GridFunction& f, const CostMatrix& cost);

/// g^c(x) = max over grid y of c(x, y) - g(y), for g sampled on the J grid.
TransformResult dual_c_transform(const GridFunction& g, const CostMatrix& cost);

/// f^cc = (f^c)^c; lies below f on the grid up to rounding.
TransformResult double_c_transform(const GridFunction& f, const CostMatrix& cost);

struct ConvexityVerdict {
  bool holds = false;
  double deviation = 0.0;  // sup |f - f^cc|
  double tol = 0.0;
};

/// 1e-7 * (1 + |f|_inf) + 4 * h * L, with L the largest first difference quotient of f.
double default_c_convex_tol(const GridFunction& f);

ConvexityVerdict is_c_convex(const GridFunction& f, const CostMatrix& cost,
                             std::optional<double> tol = std::nullopt);

/// Legendre-Fenchel conjugate f*(y) = max_x x*y - f(x) in O(n + m) via the
/// lower convex hull of f. Same values and tie-break as c_transform under the
/// bilinear cost.
TransformResult fenchel_conjugate_fast(const GridFunction& f, const Grid& grid_j);

/// (f, c) -> (-f, -c). f is c-concave for c exactly when -f is (-c)-convex.
std::pair<GridFunction, CostMatrix> to_concave_problem(const GridFunction& f,
                                                       const CostMatrix& cost);

ConvexityVerdict is_c_concave(const GridFunction& f, const CostMatrix& cost,
                              std::optional<double> tol = std::nullopt);

}  // namespace cconv
