#pragma once

#include <cstddef>
#include <vector>

#include "cconv/cost.hpp"
#include "cconv/grid.hpp"

// Plain serial loops with the textbook loop order (output index outermost).
// Kept as the baseline the parallel kernels are tested and benchmarked against.
namespace cconv::reference {

struct Reduction {
  std::vector<double> values;
  std::vector<std::size_t> argmax;
};

/// f^c(y_j) = max_i c(x_i, y_j) - f(x_i), lowest maximizing i.
Reduction c_transform(const GridFunction& f, const CostMatrix& c);

/// g^c(x_i) = max_j c(x_i, y_j) - g(y_j), lowest maximizing j.
Reduction dual_c_transform(const std::vector<double>& g, const CostMatrix& c);

/// min over x_z (|x_z - x_0| < window, all z when window <= 0) of
/// f(z) - f(x_0) - c(z, y_j) + c(x_0, y_j), evaluated term by term.
double support_slack(const GridFunction& f, const CostMatrix& c, std::size_t x0, std::size_t j,
                     double window = 0.0);

}  // namespace cconv::reference
