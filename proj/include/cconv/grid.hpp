#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace cconv {

/// Values of proper functions live in (-inf, +inf]. +inf marks points outside
/// the effective domain; -inf and NaN are never stored.
using ExtendedValue = double;

inline constexpr ExtendedValue kPlusInf = std::numeric_limits<double>::infinity();

inline bool is_plus_inf(ExtendedValue v) { return v == kPlusInf; }

/// Bounded interval [lo, hi] with lo < hi, both finite.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  Interval() = default;
  Interval(double lo, double hi);

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool contains_open(double x) const { return x > lo && x < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Uniform sampling of an interval: x_i = lo + i*h, with x_{n-1} pinned to hi.
class Grid {
 public:
  Grid(Interval interval, std::size_t n);

  const Interval& interval() const { return interval_; }
  std::size_t size() const { return n_; }
  double step() const { return step_; }
  double lo() const { return interval_.lo; }
  double hi() const { return interval_.hi; }

  double point(std::size_t i) const {
    return i + 1 == n_ ? interval_.hi : interval_.lo + static_cast<double>(i) * step_;
  }
  std::vector<double> points() const;

  /// Index of the grid point closest to x (x is clamped into the interval).
  /// Exact midpoints between two points resolve to the lower index.
  std::size_t nearest_index(double x) const;

  bool is_interior(std::size_t i) const { return i > 0 && i + 1 < n_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.interval_ == b.interval_ && a.n_ == b.n_;
  }

 private:
  Interval interval_;
  std::size_t n_;
  double step_;
};

Grid make_uniform_grid(double lo, double hi, std::size_t n);

/// Extended-real samples of a proper function on a grid.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<ExtendedValue> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const ExtendedValue> values() const { return values_; }
  ExtendedValue operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;
  /// max |f_i| over finite entries.
  double sup_norm() const;
  /// max |f_{i+1} - f_i| / h over neighbouring finite pairs (0 if none).
  double lipschitz_estimate() const;

 private:
  Grid grid_;
  std::vector<ExtendedValue> values_;
};

GridFunction sample_function(const std::function<ExtendedValue(double)>& evaluator,
                             const Grid& grid);

/// Pointwise combination a*f + b*g on a shared grid; both must be finite.
GridFunction affine_combination(double a, const GridFunction& f, double b,
                                const GridFunction& g);

/// max_i |f_i - g_i|.
double sup_norm_diff(const GridFunction& f, const GridFunction& g);

/// Piecewise-linear interpolation of finite samples; x must lie in the grid's interval.
double interpolate(const GridFunction& f, double x);

enum class QuadratureRule { trapezoid, midpoint };

/// Composite quadrature over the uniform grid with left-to-right summation.
/// The midpoint rule pairs consecutive cells: panels [x_{2k}, x_{2k+2}] sampled
/// at x_{2k+1}, so it needs an odd number of points.
double quadrature(const GridFunction& f, QuadratureRule rule = QuadratureRule::trapezoid);

struct Atom {
  double x;
  double p;
};

/// Finitely supported probability measure. Weights are positive and sum to 1
/// within 1e-12.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool within(const Interval& interval) const;

  /// Atoms ordered by (x, p); sums taken in this order are permutation invariant.
  std::vector<Atom> canonical_order() const;

 private:
  std::vector<Atom> atoms_;
};

/// sum p_i x_i, accumulated in canonical order and clamped to the atoms' hull.
double barycenter(const DiscreteMeasure& mu);

}  // namespace cconv
