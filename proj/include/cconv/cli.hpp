#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cconv/cost.hpp"
#include "cconv/grid.hpp"

namespace cconv::cli {

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;
  Interval interval_i{-1.0, 1.0};
  Interval interval_j{-1.0, 1.0};
  std::size_t n = 257;
  std::size_t m = 257;
  std::string cost = "bilinear";
  std::string f = "parabola";
  std::optional<double> tol;
  std::uint64_t seed = 20240601;
  std::string out;  // empty writes to the output stream
  std::optional<OutputFormat> format;
  bool falsify = false;
  bool exhaustive = false;
  std::size_t max_pairs = 10000;

  // jensen
  std::string form = "discrete";
  std::string measure;
  std::vector<double> points;  // midpoint form endpoints
  std::optional<double> y;
  std::optional<double> xi;
  std::string rule = "trapezoid";

  // gen
  std::string generator = "cconvexified_random";
  double amplitude = 1.0;
};

/// Analytic cost from a token: bilinear, reflector, neg_quadratic[:s],
/// one_affine:a0,a1,../b0,b1,.. (ascending powers of y), translation:neg_square|neg_abs.
CostSpec parse_cost_spec(std::string_view token);

/// Built-in functions: parabola (x^2/2), square, neg_square, neg_parabola,
/// abs, neg_abs, zero, constant[:k], pwl:x0:v0,x1:v1,...
std::function<double(double)> catalog_function(std::string_view token);

/// Atoms "x:p,x:p,..." or csv:PATH with two columns x,p.
DiscreteMeasure parse_measure(std::string_view token);

int run_transform(const RunConfig& cfg, std::ostream& out);
int run_subdiff(const RunConfig& cfg, std::ostream& out);
int run_jensen(const RunConfig& cfg, std::ostream& out);
/// Exit status 1 when any conclusion check failed.
int run_suite(const RunConfig& cfg, std::ostream& out, std::ostream& summary);
int run_gen(const RunConfig& cfg, std::ostream& out);

/// Parses arguments and dispatches; errors go to `err` with exit status 2.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cconv::cli
