#include "cconv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cconv/errors.hpp"

namespace cconv {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("interval bounds must be finite");
  }
  if (!(lo < hi)) {
    std::ostringstream os;
    os << "degenerate interval [" << lo << ", " << hi << "]";
    throw InvalidArgument(os.str());
  }
}

Grid::Grid(Interval interval, std::size_t n) : interval_(interval), n_(n) {
  if (n < 2) throw InvalidArgument("grid needs at least 2 points");
  step_ = (interval_.hi - interval_.lo) / static_cast<double>(n - 1);
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = point(i);
  return xs;
}

std::size_t Grid::nearest_index(double x) const {
  if (x <= interval_.lo) return 0;
  if (x >= interval_.hi) return n_ - 1;
  const double t = (x - interval_.lo) / step_;
  auto k = static_cast<std::size_t>(std::floor(t));
  if (t - static_cast<double>(k) > 0.5) ++k;
  return std::min(k, n_ - 1);
}

Grid make_uniform_grid(double lo, double hi, std::size_t n) {
  return Grid(Interval(lo, hi), n);
}

GridFunction::GridFunction(Grid grid, std::vector<ExtendedValue> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("grid function length " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
  }
  bool any_finite = false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (std::isnan(v)) throw InvalidArgument("NaN value at grid index " + std::to_string(i));
    if (v == -kPlusInf) throw InvalidArgument("-inf value at grid index " + std::to_string(i));
    any_finite = any_finite || std::isfinite(v);
  }
  if (!any_finite) throw InvalidArgument("improper function: every value is +inf");
}

bool GridFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) {
    if (std::isfinite(v)) m = std::max(m, std::abs(v));
  }
  return m;
}

double GridFunction::lipschitz_estimate() const {
  double lip = 0.0;
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    if (std::isfinite(values_[i]) && std::isfinite(values_[i + 1])) {
      lip = std::max(lip, std::abs(values_[i + 1] - values_[i]) / grid_.step());
    }
  }
  return lip;
}

GridFunction sample_function(const std::function<ExtendedValue(double)>& evaluator,
                             const Grid& grid) {
  std::vector<ExtendedValue> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = evaluator(grid.point(i));
    if (std::isnan(v)) {
      throw InvalidArgument("evaluator returned NaN at x = " + std::to_string(grid.point(i)));
    }
    values[i] = v;
  }
  return GridFunction(grid, std::move(values));
}

namespace {

void require_same_finite(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("grid mismatch");
  if (!f.all_finite() || !g.all_finite()) {
    throw InvalidArgument("operation requires finite values everywhere");
  }
}

}  // namespace

GridFunction affine_combination(double a, const GridFunction& f, double b,
                                const GridFunction& g) {
  require_same_finite(f, g);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * f[i] + b * g[i];
  return GridFunction(f.grid(), std::move(out));
}

double sup_norm_diff(const GridFunction& f, const GridFunction& g) {
  require_same_finite(f, g);
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) d = std::max(d, std::abs(f[i] - g[i]));
  return d;
}

double interpolate(const GridFunction& f, double x) {
  const Grid& grid = f.grid();
  if (!grid.interval().contains(x)) {
    throw InvalidArgument("interpolation point " + std::to_string(x) + " outside the grid");
  }
  const double t = (x - grid.lo()) / grid.step();
  auto k = static_cast<std::size_t>(std::floor(t));
  if (k + 1 >= grid.size()) k = grid.size() - 2;
  const double w = t - static_cast<double>(k);
  const double a = f[k];
  const double b = f[k + 1];
  if (w == 0.0) {
    if (!std::isfinite(a)) throw InvalidArgument("interpolation hits a +inf sample");
    return a;
  }
  if (w == 1.0) {
    if (!std::isfinite(b)) throw InvalidArgument("interpolation hits a +inf sample");
    return b;
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("interpolation hits a +inf sample");
  }
  return a + w * (b - a);
}

double quadrature(const GridFunction& f, QuadratureRule rule) {
  if (!f.all_finite()) throw InvalidArgument("quadrature requires finite values");
  const double h = f.grid().step();
  const std::size_t n = f.size();
  double sum = 0.0;
  switch (rule) {
    case QuadratureRule::trapezoid:
      sum = 0.5 * f[0];
      for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i];
      sum += 0.5 * f[n - 1];
      return sum * h;
    case QuadratureRule::midpoint:
      if (n % 2 == 0) throw InvalidArgument("midpoint rule needs an odd number of grid points");
      for (std::size_t i = 1; i < n; i += 2) sum += f[i];
      return sum * 2.0 * h;
  }
  return sum;
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidArgument("measure needs at least one atom");
  double total = 0.0;
  for (const Atom& a : canonical_order()) {
    if (!std::isfinite(a.x)) throw InvalidArgument("atom location must be finite");
    if (!(a.p > 0.0) || !std::isfinite(a.p)) throw InvalidArgument("atom weights must be positive");
    total += a.p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "atom weights sum to " << total << ", expected 1";
    throw InvalidArgument(os.str());
  }
}

bool DiscreteMeasure::within(const Interval& interval) const {
  return std::all_of(atoms_.begin(), atoms_.end(),
                     [&](const Atom& a) { return interval.contains(a.x); });
}

std::vector<Atom> DiscreteMeasure::canonical_order() const {
  std::vector<Atom> sorted = atoms_;
  std::sort(sorted.begin(), sorted.end(), [](const Atom& a, const Atom& b) {
    return a.x != b.x ? a.x < b.x : a.p < b.p;
  });
  return sorted;
}

double barycenter(const DiscreteMeasure& mu) {
  const std::vector<Atom> atoms = mu.canonical_order();
  double b = 0.0;
  for (const Atom& a : atoms) b += a.p * a.x;
  return std::clamp(b, atoms.front().x, atoms.back().x);
}

}  // namespace cconv
