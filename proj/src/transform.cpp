#include "cconv/transform.hpp"

#include <algorithm>
#include <cmath>

#include "cconv/errors.hpp"
#include "cconv/kernels.hpp"

namespace cconv {

TransformResult c_transform(const GridFunction& f, const CostMatrix& cost) {
  if (!(f.grid() == cost.grid_i())) throw InvalidArgument("function grid does not match cost I-grid");
  std::vector<double> values(cost.cols());
  std::vector<std::size_t> argmax(cost.cols());
  kernels::sup_over_rows(cost, f.values(), values, argmax);
  return {GridFunction(cost.grid_j(), std::move(values)), std::move(argmax)};
}

TransformResult dual_c_transform(const GridFunction& g, const CostMatrix& cost) {
  if (!(g.grid() == cost.grid_j())) throw InvalidArgument("function grid does not match cost J-grid");
  std::vector<double> values(cost.rows());
  std::vector<std::size_t> argmax(cost.rows());
  kernels::sup_over_cols(cost, g.values(), values, argmax);
  return {GridFunction(cost.grid_i(), std::move(values)), std::move(argmax)};
}

TransformResult double_c_transform(const GridFunction& f, const CostMatrix& cost) {
  return dual_c_transform(c_transform(f, cost).values, cost);
}

double default_c_convex_tol(const GridFunction& f) {
  return 1e-7 * (1.0 + f.sup_norm()) + 4.0 * f.grid().step() * f.lipschitz_estimate();
}

ConvexityVerdict is_c_convex(const GridFunction& f, const CostMatrix& cost,
                             std::optional<double> tol) {
  if (!f.all_finite()) throw InvalidArgument("c-convexity test needs a finite function");
  ConvexityVerdict v;
  v.tol = tol.value_or(default_c_convex_tol(f));
  v.deviation = sup_norm_diff(f, double_c_transform(f, cost).values);
  v.holds = v.deviation <= v.tol;
  return v;
}

TransformResult fenchel_conjugate_fast(const GridFunction& f, const Grid& grid_j) {
  const Grid& gi = f.grid();
  // Lower hull of the finite samples; collinear middle points are dropped so
  // each hull edge keeps its lowest-index endpoint.
  std::vector<std::size_t> hull;
  hull.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) continue;
    const double xi = gi.point(i);
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = (gi.point(b) - gi.point(a)) * (f[i] - f[a]) -
                           (f[b] - f[a]) * (xi - gi.point(a));
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }

  std::vector<double> values(grid_j.size());
  std::vector<std::size_t> argmax(grid_j.size());
  std::size_t k = 0;
  for (std::size_t j = 0; j < grid_j.size(); ++j) {
    const double y = grid_j.point(j);
    auto score = [&](std::size_t idx) { return gi.point(hull[idx]) * y - f[hull[idx]]; };
    double best = score(k);
    while (k + 1 < hull.size()) {
      const double next = score(k + 1);
      if (!(next > best)) break;
      best = next;
      ++k;
    }
    values[j] = best;
    argmax[j] = hull[k];
  }
  return {GridFunction(grid_j, std::move(values)), std::move(argmax)};
}

std::pair<GridFunction, CostMatrix> to_concave_problem(const GridFunction& f,
                                                       const CostMatrix& cost) {
  if (!f.all_finite()) throw InvalidArgument("concave mode needs a finite function");
  std::vector<double> neg(f.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -f[i];
  return {GridFunction(f.grid(), std::move(neg)), cost.negated()};
}

ConvexityVerdict is_c_concave(const GridFunction& f, const CostMatrix& cost,
                              std::optional<double> tol) {
  auto [neg_f, neg_c] = to_concave_problem(f, cost);
  return is_c_convex(neg_f, neg_c, tol.has_value() ? tol : std::optional(default_c_convex_tol(f)));
}

}  // namespace cconv
