#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cconv/grid.hpp"

namespace cconv {

enum class CostFamily { bilinear, one_affine, neg_quadratic, reflector, translation };

std::string_view to_string(CostFamily family);
std::optional<CostFamily> parse_cost_family(std::string_view token);

/// Analytic cost c(x, y) from one of the built-in families.
///
///   bilinear       c = x*y
///   one_affine     c = a(y)*x + b(y)
///   neg_quadratic  c = -s*(x - y)^2, s > 0
///   reflector      c = -log(1 - x*y), defined only where x*y < 1
///   translation    c = h(x - y)
class CostSpec {
 public:
  using Scalar = std::function<double(double)>;

  static CostSpec bilinear();
  /// Polynomial coefficients in ascending powers of y.
  static CostSpec one_affine(std::vector<double> a_coeffs, std::vector<double> b_coeffs);
  static CostSpec one_affine(Scalar a, Scalar b, std::string label);
  static CostSpec neg_quadratic(double scale = 1.0);
  static CostSpec reflector();
  /// `dh` is optional; without it the cost has no closed-form x-derivative.
  static CostSpec translation(Scalar h, Scalar dh, std::string label);

  CostFamily family() const { return family_; }
  const std::string& label() const { return label_; }

  /// Throws CostDomainError outside the family's domain.
  double operator()(double x, double y) const;

  /// Closed-form dc/dx, when the family provides one.
  std::optional<double> dx(double x, double y) const;

 private:
  CostSpec(CostFamily family, std::string label) : family_(family), label_(std::move(label)) {}

  CostFamily family_;
  std::string label_;
  double scale_ = 1.0;
  Scalar a_, b_;  // one_affine coefficients, or (h, dh) for translation
};

double evaluate_cost(const CostSpec& spec, double x, double y);

/// Tabulated cost c(x_i, y_j) on a product grid, row-major in i.
class CostMatrix {
 public:
  CostMatrix(Grid grid_i, Grid grid_j, std::vector<double> entries, std::string label = "tabulated");

  const Grid& grid_i() const { return grid_i_; }
  const Grid& grid_j() const { return grid_j_; }
  std::size_t rows() const { return grid_i_.size(); }
  std::size_t cols() const { return grid_j_.size(); }
  const std::string& label() const { return label_; }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols() + j]; }
  const double* row(std::size_t i) const { return entries_.data() + i * cols(); }
  const std::vector<double>& entries() const { return entries_; }

  double max_abs() const;
  /// max |c(x_{i+1}, y) - c(x_i, y)| / h_I and the analogous bound along y.
  double lipschitz_x() const;
  double lipschitz_y() const;

  /// Entry-wise negation; the label gains or loses a leading '-'.
  CostMatrix negated() const;

 private:
  Grid grid_i_, grid_j_;
  std::vector<double> entries_;
  std::string label_;
};

CostMatrix tabulate_cost(const CostSpec& spec, const Grid& grid_i, const Grid& grid_j);

/// Tabulates an arbitrary evaluator (user-defined costs outside the built-in families).
CostMatrix tabulate_function(const std::function<double(double, double)>& c, const Grid& grid_i,
                             const Grid& grid_j, std::string label);

enum class StructureProperty { one_affine, two_affine, one_concave, one_convex, two_concave };

std::string_view to_string(StructureProperty property);

/// Location of the first violating second difference: centre (i, j) and the
/// axis along which the difference was taken (0 = x, 1 = y, 2 = diagonal,
/// 3 = anti-diagonal).
struct StructureWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  int axis = 0;
};

struct StructureVerdict {
  std::string property;
  bool holds = true;
  double max_violation = 0.0;
  double tol = 0.0;
  std::optional<StructureWitness> witness;
};

/// 1e-9 * (1 + max |entry|).
double default_structure_tol(const CostMatrix& matrix);

StructureVerdict check_structure(const CostMatrix& matrix, StructureProperty property,
                                 std::optional<double> tol = std::nullopt);

/// Joint concavity tested only along grid-aligned and diagonal segments.
StructureVerdict check_joint_concavity(const CostMatrix& matrix,
                                       std::optional<double> tol = std::nullopt);

}  // namespace cconv
