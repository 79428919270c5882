#include "cconv/subdifferential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cconv/errors.hpp"
#include "cconv/kernels.hpp"
#include "cconv/transform.hpp"

namespace cconv {

namespace {

void require_matching(const GridFunction& f, const CostMatrix& cost) {
  if (!(f.grid() == cost.grid_i())) throw InvalidArgument("function grid does not match cost I-grid");
}

void require_finite_at(const GridFunction& f, std::size_t x0) {
  if (x0 >= f.size()) throw InvalidArgument("x0 index out of range");
  if (!std::isfinite(f[x0])) {
    throw InvalidArgument("f(x0) = +inf at index " + std::to_string(x0));
  }
}

SubdifferentialSet collect(std::size_t x0, const GridFunction& f, const CostMatrix& cost,
                           const std::vector<double>& col_min, double tol) {
  SubdifferentialSet s;
  s.x0_index = x0;
  s.tol = tol;
  const double* row = cost.row(x0);
  for (std::size_t j = 0; j < cost.cols(); ++j) {
    const double slack = col_min[j] - (f[x0] - row[j]);
    if (slack >= -tol) {
      s.y_indices.push_back(j);
      s.slacks.push_back(slack);
    }
  }
  return s;
}

}  // namespace

bool SubdifferentialSet::contains(std::size_t j) const {
  return std::binary_search(y_indices.begin(), y_indices.end(), j);
}

bool SubdifferentialSet::contiguous() const {
  return y_indices.empty() || y_indices.back() - y_indices.front() + 1 == y_indices.size();
}

double default_membership_tol(const GridFunction& f, const CostMatrix& cost) {
  return 1e-9 * (1.0 + f.sup_norm() + cost.max_abs());
}

SlackTable support_slacks(const GridFunction& f, const CostMatrix& cost) {
  require_matching(f, cost);
  const TransformResult fc = c_transform(f, cost);
  std::vector<double> col_min(cost.cols());
  for (std::size_t j = 0; j < col_min.size(); ++j) col_min[j] = -fc.values[j];
  SlackTable t{cost.rows(), cost.cols(), std::vector<double>(cost.rows() * cost.cols())};
  kernels::slack_matrix(cost, f.values(), col_min, t.values);
  return t;
}

SubdifferentialSet c_subdifferential(const GridFunction& f, const CostMatrix& cost,
                                     std::size_t x0_index, double tol) {
  require_matching(f, cost);
  require_finite_at(f, x0_index);
  std::vector<double> col_min(cost.cols());
  kernels::min_over_rows(cost, f.values(), 0, cost.rows(), col_min);
  return collect(x0_index, f, cost, col_min, tol);
}

SubdifferentialSet c_subdifferential_via_conjugate(const GridFunction& f, const CostMatrix& cost,
                                                   std::size_t x0_index, double tol) {
  require_matching(f, cost);
  require_finite_at(f, x0_index);
  const TransformResult fc = c_transform(f, cost);
  SubdifferentialSet s;
  s.x0_index = x0_index;
  s.tol = tol;
  const double* row = cost.row(x0_index);
  for (std::size_t j = 0; j < cost.cols(); ++j) {
    // f^c(y) >= c(x0, y) - f(x0) always; the gap is the negated support slack.
    const double gap = fc.values[j] - (row[j] - f[x0_index]);
    if (std::abs(gap) <= tol) {
      s.y_indices.push_back(j);
      s.slacks.push_back(-gap);
    }
  }
  return s;
}

SubdifferentialMap subdifferential_map(const SlackTable& slacks, double tol) {
  SubdifferentialMap map;
  map.sets.resize(slacks.rows);
  map.dom.resize(slacks.rows);
  for (std::size_t i = 0; i < slacks.rows; ++i) {
    SubdifferentialSet& s = map.sets[i];
    s.x0_index = i;
    s.tol = tol;
    for (std::size_t j = 0; j < slacks.cols; ++j) {
      if (slacks(i, j) >= -tol) {
        s.y_indices.push_back(j);
        s.slacks.push_back(slacks(i, j));
      }
    }
    map.dom[i] = !s.empty();
  }
  return map;
}

SubdifferentialMap subdifferential_map(const GridFunction& f, const CostMatrix& cost, double tol) {
  if (!f.all_finite()) throw InvalidArgument("subdifferential map needs a finite function");
  return subdifferential_map(support_slacks(f, cost), tol);
}

std::pair<double, double> lateral_c_derivatives(const SubdifferentialSet& s, const Grid& grid_j) {
  if (s.empty()) throw InvalidArgument("lateral c-derivatives of an empty set");
  return {grid_j.point(s.y_indices.front()), grid_j.point(s.y_indices.back())};
}

double support_curve_eval(const SupportCurve& curve, const CostSpec& cost, double x) {
  return curve.f0 + (cost(x, curve.y) - cost(curve.x0, curve.y));
}

GridFunction envelope_reconstruct(const GridFunction& f, const CostMatrix& cost,
                                  const std::vector<std::optional<std::size_t>>& selection,
                                  double tol) {
  require_matching(f, cost);
  const std::size_t n = cost.rows();
  if (selection.size() != n) throw InvalidArgument("selection must have one entry per grid point");
  if (selection.front() || selection.back()) {
    throw InvalidArgument("selection is restricted to interior points");
  }
  const SlackTable slacks = support_slacks(f, cost);
  bool any = false;
  for (std::size_t t = 1; t + 1 < n; ++t) {
    if (!selection[t]) continue;
    const std::size_t j = *selection[t];
    if (j >= cost.cols()) throw InvalidArgument("selection index out of range");
    if (!std::isfinite(f[t]) || slacks(t, j) < -tol) {
      throw InvalidArgument("selected y-index " + std::to_string(j) +
                            " is not a c-subgradient at x-index " + std::to_string(t));
    }
    any = true;
  }
  if (!any) throw InvalidArgument("selection is empty");

  std::vector<double> out(n, -std::numeric_limits<double>::infinity());
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t t = 1; t + 1 < n; ++t) {
      if (!selection[t]) continue;
      const std::size_t j = *selection[t];
      out[i] = std::max(out[i], f[t] + (cost(i, j) - cost(t, j)));
    }
  }
  return GridFunction(f.grid(), std::move(out));
}

std::pair<std::size_t, std::size_t> window_rows(const Grid& grid, const LocalWindow& window) {
  if (window.x0_index >= grid.size()) throw InvalidArgument("window centre out of range");
  if (!(window.epsilon > 0.0)) throw InvalidArgument("window radius must be positive");
  const double x0 = grid.point(window.x0_index);
  const double reach = window.epsilon - 1e-12 * grid.interval().length();
  std::size_t begin = window.x0_index;
  while (begin > 0 && std::abs(grid.point(begin - 1) - x0) < reach) --begin;
  std::size_t end = window.x0_index + 1;
  while (end < grid.size() && std::abs(grid.point(end) - x0) < reach) ++end;
  return {begin, end};
}

SubdifferentialSet local_c_subdifferential(const GridFunction& f, const CostMatrix& cost,
                                           const LocalWindow& window, double tol) {
  require_matching(f, cost);
  require_finite_at(f, window.x0_index);
  const auto [begin, end] = window_rows(cost.grid_i(), window);
  std::vector<double> col_min(cost.cols());
  kernels::min_over_rows(cost, f.values(), begin, end, col_min);
  return collect(window.x0_index, f, cost, col_min, tol);
}

std::vector<SubdifferentialSet> local_subdifferential_sweep(const GridFunction& f,
                                                            const CostMatrix& cost,
                                                            std::size_t x0_index,
                                                            const std::vector<double>& epsilons,
                                                            double tol) {
  std::vector<SubdifferentialSet> out;
  out.reserve(epsilons.size());
  for (double eps : epsilons) {
    out.push_back(local_c_subdifferential(f, cost, LocalWindow{x0_index, eps}, tol));
  }
  return out;
}

LocalConjugate local_double_conjugate(const GridFunction& f, const CostMatrix& cost,
                                      const LocalWindow& window, double tol) {
  require_matching(f, cost);
  require_finite_at(f, window.x0_index);
  const auto [begin, end] = window_rows(cost.grid_i(), window);
  std::vector<double> col_min(cost.cols());
  kernels::min_over_rows(cost, f.values(), begin, end, col_min);
  const SubdifferentialSet local = collect(window.x0_index, f, cost, col_min, tol);

  // inf_z f(z) + c(x0, y) - c(z, y) = col_min[j] + c(x0, y_j)
  const double* row = cost.row(window.x0_index);
  LocalConjugate out;
  out.local_set_empty = local.empty();
  out.value = -std::numeric_limits<double>::infinity();
  if (local.empty()) {
    for (std::size_t j = 0; j < cost.cols(); ++j) out.value = std::max(out.value, col_min[j] + row[j]);
  } else {
    for (std::size_t j : local.y_indices) out.value = std::max(out.value, col_min[j] + row[j]);
  }
  return out;
}

}  // namespace cconv
