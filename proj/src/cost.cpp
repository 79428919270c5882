#include "cconv/cost.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "cconv/errors.hpp"

namespace cconv {

std::string_view to_string(CostFamily family) {
  switch (family) {
    case CostFamily::bilinear: return "bilinear";
    case CostFamily::one_affine: return "one_affine";
    case CostFamily::neg_quadratic: return "neg_quadratic";
    case CostFamily::reflector: return "reflector";
    case CostFamily::translation: return "translation";
  }
  return "unknown";
}

std::optional<CostFamily> parse_cost_family(std::string_view token) {
  for (CostFamily f : {CostFamily::bilinear, CostFamily::one_affine, CostFamily::neg_quadratic,
                       CostFamily::reflector, CostFamily::translation}) {
    if (to_string(f) == token) return f;
  }
  return std::nullopt;
}

namespace {

double horner(const std::vector<double>& coeffs, double y) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * y + *it;
  return acc;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
  return os.str();
}

}  // namespace

CostSpec CostSpec::bilinear() { return CostSpec(CostFamily::bilinear, "bilinear"); }

CostSpec CostSpec::one_affine(std::vector<double> a_coeffs, std::vector<double> b_coeffs) {
  CostSpec spec(CostFamily::one_affine, "one_affine:" + join(a_coeffs) + "/" + join(b_coeffs));
  spec.a_ = [a = std::move(a_coeffs)](double y) { return horner(a, y); };
  spec.b_ = [b = std::move(b_coeffs)](double y) { return horner(b, y); };
  return spec;
}

CostSpec CostSpec::one_affine(Scalar a, Scalar b, std::string label) {
  if (!a || !b) throw InvalidArgument("one_affine cost needs both a(y) and b(y)");
  CostSpec spec(CostFamily::one_affine, "one_affine:" + label);
  spec.a_ = std::move(a);
  spec.b_ = std::move(b);
  return spec;
}

CostSpec CostSpec::neg_quadratic(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("neg_quadratic scale must be positive");
  }
  std::ostringstream os;
  os.precision(17);
  os << "neg_quadratic:" << scale;
  CostSpec spec(CostFamily::neg_quadratic, os.str());
  spec.scale_ = scale;
  return spec;
}

CostSpec CostSpec::reflector() { return CostSpec(CostFamily::reflector, "reflector"); }

CostSpec CostSpec::translation(Scalar h, Scalar dh, std::string label) {
  if (!h) throw InvalidArgument("translation cost needs h");
  CostSpec spec(CostFamily::translation, "translation:" + label);
  spec.a_ = std::move(h);
  spec.b_ = std::move(dh);
  return spec;
}

double CostSpec::operator()(double x, double y) const {
  switch (family_) {
    case CostFamily::bilinear:
      return x * y;
    case CostFamily::one_affine:
      return a_(y) * x + b_(y);
    case CostFamily::neg_quadratic: {
      const double d = x - y;
      return -scale_ * (d * d);
    }
    case CostFamily::reflector: {
      const double xy = x * y;
      if (!(xy < 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "reflector cost undefined at (x, y) = (" << x << ", " << y << "): x*y >= 1";
        throw CostDomainError(os.str(), x, y);
      }
      return -std::log1p(-xy);
    }
    case CostFamily::translation:
      return a_(x - y);
  }
  return 0.0;
}

std::optional<double> CostSpec::dx(double x, double y) const {
  switch (family_) {
    case CostFamily::bilinear: return y;
    case CostFamily::one_affine: return a_(y);
    case CostFamily::neg_quadratic: return -2.0 * scale_ * (x - y);
    case CostFamily::reflector: return y / (1.0 - x * y);
    case CostFamily::translation:
      if (b_) return b_(x - y);
      return std::nullopt;
  }
  return std::nullopt;
}

double evaluate_cost(const CostSpec& spec, double x, double y) { return spec(x, y); }

CostMatrix::CostMatrix(Grid grid_i, Grid grid_j, std::vector<double> entries, std::string label)
    : grid_i_(grid_i), grid_j_(grid_j), entries_(std::move(entries)), label_(std::move(label)) {
  if (entries_.size() != grid_i_.size() * grid_j_.size()) {
    throw InvalidArgument("cost matrix size does not match its grids");
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (!std::isfinite(entries_[k])) {
      throw InvalidArgument("cost entry (" + std::to_string(k / cols()) + ", " +
                            std::to_string(k % cols()) + ") is not finite");
    }
  }
}

double CostMatrix::max_abs() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

double CostMatrix::lipschitz_x() const {
  double lip = 0.0;
  for (std::size_t i = 0; i + 1 < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      lip = std::max(lip, std::abs((*this)(i + 1, j) - (*this)(i, j)));
    }
  }
  return lip / grid_i_.step();
}

double CostMatrix::lipschitz_y() const {
  double lip = 0.0;
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j + 1 < cols(); ++j) {
      lip = std::max(lip, std::abs((*this)(i, j + 1) - (*this)(i, j)));
    }
  }
  return lip / grid_j_.step();
}

CostMatrix CostMatrix::negated() const {
  std::vector<double> neg(entries_.size());
  for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -entries_[k];
  std::string label = !label_.empty() && label_.front() == '-' ? label_.substr(1) : "-" + label_;
  return CostMatrix(grid_i_, grid_j_, std::move(neg), std::move(label));
}

namespace {

// Rows are filled independently; the first failing row (lowest index) wins so
// the reported violation does not depend on thread scheduling.
CostMatrix tabulate_rows(const std::function<double(double, double)>& c, const Grid& gi,
                         const Grid& gj, std::string label) {
  const std::size_t n = gi.size();
  const std::size_t m = gj.size();
  std::vector<double> entries(n * m);
  std::vector<std::exception_ptr> failures(n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double x = gi.point(i);
    try {
      for (std::size_t j = 0; j < m; ++j) {
        try {
          entries[i * m + j] = c(x, gj.point(j));
        } catch (const CostDomainError& e) {
          throw CostDomainError(e.what(), e.x(), e.y(), i, j);
        }
      }
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return CostMatrix(gi, gj, std::move(entries), std::move(label));
}

}  // namespace

CostMatrix tabulate_cost(const CostSpec& spec, const Grid& grid_i, const Grid& grid_j) {
  return tabulate_rows([&spec](double x, double y) { return spec(x, y); }, grid_i, grid_j,
                       spec.label());
}

CostMatrix tabulate_function(const std::function<double(double, double)>& c, const Grid& grid_i,
                             const Grid& grid_j, std::string label) {
  return tabulate_rows(c, grid_i, grid_j, std::move(label));
}

std::string_view to_string(StructureProperty property) {
  switch (property) {
    case StructureProperty::one_affine: return "one_affine";
    case StructureProperty::two_affine: return "two_affine";
    case StructureProperty::one_concave: return "one_concave";
    case StructureProperty::one_convex: return "one_convex";
    case StructureProperty::two_concave: return "two_concave";
  }
  return "unknown";
}

double default_structure_tol(const CostMatrix& matrix) { return 1e-9 * (1.0 + matrix.max_abs()); }

namespace {

enum class Shape { affine, concave, convex };

double violation_of(Shape shape, double d2) {
  switch (shape) {
    case Shape::affine: return std::abs(d2);
    case Shape::concave: return std::max(0.0, d2);
    case Shape::convex: return std::max(0.0, -d2);
  }
  return 0.0;
}

struct Direction {
  int axis;
  int di;
  int dj;
};

void scan(const CostMatrix& c, Shape shape, Direction dir, double tol, StructureVerdict& out) {
  const auto n = static_cast<std::ptrdiff_t>(c.rows());
  const auto m = static_cast<std::ptrdiff_t>(c.cols());
  const std::ptrdiff_t ai = dir.di != 0 ? 1 : 0;
  const std::ptrdiff_t aj = dir.dj != 0 ? 1 : 0;
  for (std::ptrdiff_t i = ai; i < n - ai; ++i) {
    for (std::ptrdiff_t j = aj; j < m - aj; ++j) {
      const double d2 = c(static_cast<std::size_t>(i - dir.di), static_cast<std::size_t>(j - dir.dj)) -
                        2.0 * c(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                        c(static_cast<std::size_t>(i + dir.di), static_cast<std::size_t>(j + dir.dj));
      const double v = violation_of(shape, d2);
      out.max_violation = std::max(out.max_violation, v);
      if (v > tol && !out.witness) {
        out.witness = StructureWitness{static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                       dir.axis};
      }
    }
  }
}

}  // namespace

StructureVerdict check_structure(const CostMatrix& matrix, StructureProperty property,
                                 std::optional<double> tol) {
  const bool along_x = property == StructureProperty::one_affine ||
                       property == StructureProperty::one_concave ||
                       property == StructureProperty::one_convex;
  if ((along_x ? matrix.rows() : matrix.cols()) < 3) {
    throw InvalidArgument("grid too small to test " + std::string(to_string(property)) +
                          " (need at least 3 points along the tested axis)");
  }
  Shape shape = Shape::affine;
  if (property == StructureProperty::one_concave || property == StructureProperty::two_concave) {
    shape = Shape::concave;
  } else if (property == StructureProperty::one_convex) {
    shape = Shape::convex;
  }
  StructureVerdict out;
  out.property = std::string(to_string(property));
  out.tol = tol.value_or(default_structure_tol(matrix));
  scan(matrix, shape, along_x ? Direction{0, 1, 0} : Direction{1, 0, 1}, out.tol, out);
  out.holds = out.max_violation <= out.tol;
  return out;
}

StructureVerdict check_joint_concavity(const CostMatrix& matrix, std::optional<double> tol) {
  if (matrix.rows() < 3 || matrix.cols() < 3) {
    throw InvalidArgument("grid too small to test joint concavity");
  }
  StructureVerdict out;
  out.property = "jointly_concave_segments";
  out.tol = tol.value_or(default_structure_tol(matrix));
  for (Direction dir : {Direction{0, 1, 0}, Direction{1, 0, 1}, Direction{2, 1, 1},
                        Direction{3, 1, -1}}) {
    scan(matrix, Shape::concave, dir, out.tol, out);
  }
  out.holds = out.max_violation <= out.tol;
  return out;
}

}  // namespace cconv
