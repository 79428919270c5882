#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cconv/cost.hpp"
#include "cconv/grid.hpp"

namespace cconv {

/// Grid approximation of the c-subdifferential at x_{x0_index}: the y-indices
/// whose support curve stays below f up to `tol`. Indices are ascending and
/// `slacks[k]` is the support slack of `y_indices[k]`.
struct SubdifferentialSet {
  std::size_t x0_index = 0;
  std::vector<std::size_t> y_indices;
  std::vector<double> slacks;
  double tol = 0.0;

  bool empty() const { return y_indices.empty(); }
  bool contains(std::size_t j) const;
  /// True when the members form one run of consecutive indices (vacuously for empty sets).
  bool contiguous() const;
};

/// 1e-9 * (1 + |f|_inf + |c|_inf), the membership tolerance used across the toolkit.
double default_membership_tol(const GridFunction& f, const CostMatrix& cost);

/// Support slack of every grid pair, row-major in x:
///   slack(i, j) = min_z [f(z) - f(x_i) - c(z, y_j) + c(x_i, y_j)],
/// computed through the conjugate identity min_z [f(z) - c(z, y)] = -f^c(y).
/// y_j is in the c-subdifferential at x_i exactly when slack(i, j) >= -tol.
struct SlackTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

SlackTable support_slacks(const GridFunction& f, const CostMatrix& cost);

/// Membership by direct sweep of the defining inequality over all grid x.
SubdifferentialSet c_subdifferential(const GridFunction& f, const CostMatrix& cost,
                                     std::size_t x0_index, double tol);

/// Membership by the conjugate criterion f^c(y) = c(x0, y) - f(x0) (within tol).
/// Produces the same set as c_subdifferential.
SubdifferentialSet c_subdifferential_via_conjugate(const GridFunction& f, const CostMatrix& cost,
                                                   std::size_t x0_index, double tol);

struct SubdifferentialMap {
  std::vector<SubdifferentialSet> sets;  // one per x-grid point, in index order
  std::vector<bool> dom;                 // sets[i] nonempty
};

SubdifferentialMap subdifferential_map(const GridFunction& f, const CostMatrix& cost, double tol);
SubdifferentialMap subdifferential_map(const SlackTable& slacks, double tol);

/// (min, max) of the member y-values.
std::pair<double, double> lateral_c_derivatives(const SubdifferentialSet& s, const Grid& grid_j);

struct SupportCurve {
  double x0 = 0.0;
  double y = 0.0;
  double f0 = 0.0;
};

/// f0 + c(x, y) - c(x0, y); returns f0 exactly at x = x0.
double support_curve_eval(const SupportCurve& curve, const CostSpec& cost, double x);

/// Upper envelope of the support curves chosen at interior points:
///   out(x_i) = max_t f(t) + c(x_i, y(t)) - c(t, y(t)).
/// `selection[t]` names the y-index used at x_t; endpoints must be left empty
/// and at least one interior point must be selected. Every selection is
/// verified against the subdifferential at `tol`.
GridFunction envelope_reconstruct(const GridFunction& f, const CostMatrix& cost,
                                  const std::vector<std::optional<std::size_t>>& selection,
                                  double tol);

/// Neighbourhood {x : |x - x0| < epsilon} of a grid point.
struct LocalWindow {
  std::size_t x0_index = 0;
  double epsilon = 0.0;
};

/// Grid rows [begin, end) inside the open window. Points whose distance equals
/// epsilon up to 1e-12 of the interval length are excluded.
std::pair<std::size_t, std::size_t> window_rows(const Grid& grid, const LocalWindow& window);

SubdifferentialSet local_c_subdifferential(const GridFunction& f, const CostMatrix& cost,
                                           const LocalWindow& window, double tol);

/// One local set per epsilon, for probing the "some epsilon > 0" quantifier.
std::vector<SubdifferentialSet> local_subdifferential_sweep(const GridFunction& f,
                                                            const CostMatrix& cost,
                                                            std::size_t x0_index,
                                                            const std::vector<double>& epsilons,
                                                            double tol);

struct LocalConjugate {
  double value = 0.0;
  /// The local subdifferential was empty; `value` then takes the sup over all of J.
  bool local_set_empty = false;
};

/// sup over y in the local subdifferential of inf over z in the window of
/// f(z) + c(x0, y) - c(z, y).
LocalConjugate local_double_conjugate(const GridFunction& f, const CostMatrix& cost,
                                      const LocalWindow& window, double tol);

}  // namespace cconv
