#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cconv/cost.hpp"
#include "cconv/grid.hpp"
#include "cconv/verdict.hpp"

namespace cconv {

/// f on I = [a, b], either analytic or tabulated. Tabulated functions are
/// linearly interpolated off-grid and carry an error allowance of 2*L*h.
class JensenFunction {
 public:
  static JensenFunction analytic(std::function<double(double)> f, const Grid& grid);
  static JensenFunction tabulated(GridFunction samples);

  double operator()(double x) const;
  bool interpolated() const { return !eval_; }
  double interpolation_error() const { return interp_error_; }
  const Grid& grid() const { return samples_.grid(); }
  const GridFunction& samples() const { return samples_; }

 private:
  JensenFunction(std::function<double(double)> eval, GridFunction samples, double interp_error)
      : eval_(std::move(eval)), samples_(std::move(samples)), interp_error_(interp_error) {}

  std::function<double(double)> eval_;
  GridFunction samples_;
  double interp_error_ = 0.0;
};

/// Everything a Jensen-type bound needs: f, the cost, and the y-grid searched
/// for a witness when none is supplied.
struct JensenSetup {
  JensenFunction f;
  CostSpec cost;
  Grid grid_j;
};

/// Both sides of a Jensen-type bound, lhs (the f gap) >= rhs (the cost gap).
struct JensenReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs
  double y_witness = 0.0;
  double tol = 0.0;     // effective tolerance: interpolation and witness-search allowances included
  bool holds = true;    // slack >= -tol
  bool hypothesis_verified = true;
  double membership_slack = 0.0;
  bool interpolated = false;
  std::vector<std::string> warnings;
};

/// min over grid x of [f(x) - c(x, y)] - [f(point) - c(point, y)]; y is a
/// c-subgradient at `point` when this is >= -tol.
double membership_slack(const JensenSetup& setup, double point, double y);

/// The grid y with the largest membership slack at `point`, if that slack is >= -tol.
std::optional<double> find_witness(const JensenSetup& setup, double point, double tol);

/// sum p_i f(x_i) - f(b) >= sum p_i c(x_i, y) - c(b, y), b the barycenter.
JensenReport discrete_jensen_gap(const JensenSetup& setup, const DiscreteMeasure& mu,
                                 std::optional<double> y, double tol);

/// Two equal atoms at a and b.
JensenReport midpoint_bound(const JensenSetup& setup, double a, double b, std::optional<double> y,
                            double tol);

/// Midpoint concavity of g(x) = c(x, y) - f(x) for y a c-subgradient at (a + b)/2.
Verdict support_concavity_check(const JensenSetup& setup, double a, double b,
                                std::optional<double> y, double tol);

/// lhs = int f - f(xi)(b - a), rhs = int [c(x, y) - c(xi, y)] dx over the grid
/// of f. xi defaults to the midpoint and is snapped to the grid.
JensenReport integral_jensen_bound(const JensenSetup& setup, std::optional<double> xi,
                                   std::optional<double> y, QuadratureRule rule, double tol);

/// Weighted form for a discrete probability measure whose barycenter lies in (a, b).
JensenReport weighted_integral_bound(const JensenSetup& setup, const DiscreteMeasure& mu,
                                     std::optional<double> y, double tol);

/// For 1-affine costs: the cost side of the integral bound vanishes for every
/// grid y, and f((a + b)/2) <= mean of f. Throws if the cost is not 1-affine.
Verdict classical_reduction_check(const JensenSetup& setup, double tol);

}  // namespace cconv
