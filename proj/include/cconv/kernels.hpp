#pragma once

#include <cstddef>
#include <span>

#include "cconv/cost.hpp"

// OpenMP-parallel reductions behind the transform and subdifferential modules.
// Every output element is reduced sequentially by a single thread, so results
// (including argmax tie-breaks) are identical for any thread count.
namespace cconv::kernels {

/// out[j] = max_i (c(i, j) - f[i]) over finite f[i]; arg[j] = lowest maximizing i.
/// Columns with no finite f[i] get -inf and arg = rows().
void sup_over_rows(const CostMatrix& c, std::span<const double> f, std::span<double> out,
                   std::span<std::size_t> arg);

/// out[i] = max_j (c(i, j) - g[j]) over finite g[j]; arg[i] = lowest maximizing j.
void sup_over_cols(const CostMatrix& c, std::span<const double> g, std::span<double> out,
                   std::span<std::size_t> arg);

/// out[j] = min over rows i in [row_begin, row_end) with finite f[i] of (f[i] - c(i, j));
/// +inf when the range holds no finite sample.
void min_over_rows(const CostMatrix& c, std::span<const double> f, std::size_t row_begin,
                   std::size_t row_end, std::span<double> out);

/// Support slack of every (x_i, y_j):
///   out[i*m + j] = col_min[j] - (f[i] - c(i, j)),
/// i.e. min_z [f(z) - f(x_i) - c(z, y_j) + c(x_i, y_j)]. Rows with f[i] = +inf get -inf.
void slack_matrix(const CostMatrix& c, std::span<const double> f, std::span<const double> col_min,
                  std::span<double> out);

}  // namespace cconv::kernels
