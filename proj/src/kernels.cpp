#include "cconv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cconv::kernels {

namespace {

constexpr std::size_t kColumnBlock = 256;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void sup_over_rows(const CostMatrix& c, std::span<const double> f, std::span<double> out,
                   std::span<std::size_t> arg) {
  const std::size_t n = c.rows();
  const std::size_t m = c.cols();
  const auto blocks = static_cast<std::ptrdiff_t>((m + kColumnBlock - 1) / kColumnBlock);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t j0 = static_cast<std::size_t>(b) * kColumnBlock;
    const std::size_t j1 = std::min(m, j0 + kColumnBlock);
    std::fill(out.begin() + j0, out.begin() + j1, -kInf);
    std::fill(arg.begin() + j0, arg.begin() + j1, n);
    for (std::size_t i = 0; i < n; ++i) {
      const double fi = f[i];
      if (!std::isfinite(fi)) continue;
      const double* row = c.row(i);
      for (std::size_t j = j0; j < j1; ++j) {
        const double v = row[j] - fi;
        if (v > out[j] || arg[j] == n) {
          out[j] = v;
          arg[j] = i;
        }
      }
    }
  }
}

void sup_over_cols(const CostMatrix& c, std::span<const double> g, std::span<double> out,
                   std::span<std::size_t> arg) {
  const std::size_t m = c.cols();
  const auto n = static_cast<std::ptrdiff_t>(c.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double* row = c.row(i);
    double best = -kInf;
    std::size_t best_j = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(g[j])) continue;
      const double v = row[j] - g[j];
      if (v > best || best_j == m) {
        best = v;
        best_j = j;
      }
    }
    out[i] = best;
    arg[i] = best_j;
  }
}

void min_over_rows(const CostMatrix& c, std::span<const double> f, std::size_t row_begin,
                   std::size_t row_end, std::span<double> out) {
  const std::size_t m = c.cols();
  const auto blocks = static_cast<std::ptrdiff_t>((m + kColumnBlock - 1) / kColumnBlock);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t j0 = static_cast<std::size_t>(b) * kColumnBlock;
    const std::size_t j1 = std::min(m, j0 + kColumnBlock);
    std::fill(out.begin() + j0, out.begin() + j1, kInf);
    for (std::size_t i = row_begin; i < row_end; ++i) {
      const double fi = f[i];
      if (!std::isfinite(fi)) continue;
      const double* row = c.row(i);
      for (std::size_t j = j0; j < j1; ++j) out[j] = std::min(out[j], fi - row[j]);
    }
  }
}

void slack_matrix(const CostMatrix& c, std::span<const double> f, std::span<const double> col_min,
                  std::span<double> out) {
  const std::size_t m = c.cols();
  const auto n = static_cast<std::ptrdiff_t>(c.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double* dst = out.data() + i * m;
    if (!std::isfinite(f[i])) {
      std::fill(dst, dst + m, -kInf);
      continue;
    }
    const double* row = c.row(i);
    for (std::size_t j = 0; j < m; ++j) dst[j] = col_min[j] - (f[i] - row[j]);
  }
}

}  // namespace cconv::kernels
