#include "cconv/reference.hpp"

#include <cmath>
#include <limits>

namespace cconv::reference {

Reduction c_transform(const GridFunction& f, const CostMatrix& c) {
  Reduction r;
  r.values.assign(c.cols(), -std::numeric_limits<double>::infinity());
  r.argmax.assign(c.cols(), c.rows());
  for (std::size_t j = 0; j < c.cols(); ++j) {
    for (std::size_t i = 0; i < c.rows(); ++i) {
      if (!std::isfinite(f[i])) continue;
      const double v = c(i, j) - f[i];
      if (r.argmax[j] == c.rows() || v > r.values[j]) {
        r.values[j] = v;
        r.argmax[j] = i;
      }
    }
  }
  return r;
}

Reduction dual_c_transform(const std::vector<double>& g, const CostMatrix& c) {
  Reduction r;
  r.values.assign(c.rows(), -std::numeric_limits<double>::infinity());
  r.argmax.assign(c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) {
      if (!std::isfinite(g[j])) continue;
      const double v = c(i, j) - g[j];
      if (r.argmax[i] == c.cols() || v > r.values[i]) {
        r.values[i] = v;
        r.argmax[i] = j;
      }
    }
  }
  return r;
}

double support_slack(const GridFunction& f, const CostMatrix& c, std::size_t x0, std::size_t j,
                     double window) {
  const Grid& g = c.grid_i();
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < c.rows(); ++z) {
    if (!std::isfinite(f[z])) continue;
    if (window > 0.0 && !(std::abs(g.point(z) - g.point(x0)) < window)) continue;
    slack = std::min(slack, f[z] - f[x0] - c(z, j) + c(x0, j));
  }
  return slack;
}

}  // namespace cconv::reference
