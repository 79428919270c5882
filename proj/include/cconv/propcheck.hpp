#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "cconv/cost.hpp"
#include "cconv/grid.hpp"
#include "cconv/verdict.hpp"

namespace cconv {

enum class Generator { random_piecewise_linear, random_smooth_fourier, cconvexified_random };

std::string_view to_string(Generator g);
std::optional<Generator> parse_generator(std::string_view token);

/// A cost that is not one of the built-in families, tabulated from an evaluator.
struct CustomCost {
  std::function<double(double, double)> c;
  std::string label;
};

using CostSource = std::variant<CostSpec, CustomCost>;

CostMatrix tabulate(const CostSource& source, const Grid& grid_i, const Grid& grid_j);

struct InstanceConfig {
  std::uint64_t seed = 1;
  std::size_t n = 257;
  std::size_t m = 257;
  Interval interval_i{-1.0, 1.0};
  Interval interval_j{-1.0, 1.0};
  CostSource cost = CostSpec::bilinear();
  Generator generator = Generator::cconvexified_random;
  double amplitude = 1.0;
};

struct Instance {
  GridFunction f;
  CostMatrix cost;
};

/// Deterministic: the same config always yields bit-identical instances.
/// cconvexified_random returns the double c-transform of a random piecewise
/// linear function, which is c-convex by construction.
Instance generate_instance(const InstanceConfig& cfg);

/// Bit-reproducible uniform doubles in [0, 1) from a seeded mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n);  // uniform in [0, n)

 private:
  std::mt19937_64 engine_;
};

/// Controls pair sweeps. Pairs are enumerated exhaustively when `exhaustive`
/// is set or when all pairs fit under `max_pairs`; otherwise `max_pairs`
/// random pairs are drawn from a generator seeded with `seed`.
struct PairSampling {
  std::size_t max_pairs = 10000;
  bool exhaustive = false;
  std::uint64_t seed = 1;
};

Verdict check_mixture(const GridFunction& f, const GridFunction& g, const CostMatrix& cost,
                      double lambda, std::optional<double> tol = std::nullopt);

Verdict check_order_propagation(const GridFunction& f, const GridFunction& g,
                                const CostMatrix& cost, std::optional<double> tol = std::nullopt,
                                const PairSampling& sampling = {});

Verdict check_subdiff_convexity(const GridFunction& f, const CostMatrix& cost,
                                std::optional<double> tol = std::nullopt,
                                const PairSampling& sampling = {});

Verdict check_set_valued_convexity(const GridFunction& f, const CostMatrix& cost, double lambda,
                                   std::optional<double> tol = std::nullopt,
                                   const PairSampling& sampling = {});

Verdict check_intersection_inclusion(const GridFunction& f, const CostMatrix& cost,
                                     const std::vector<double>& lambdas,
                                     std::optional<double> tol = std::nullopt,
                                     const PairSampling& sampling = {});

Verdict check_domain_interval(const GridFunction& f, const CostMatrix& cost,
                              std::optional<double> tol = std::nullopt,
                              const PairSampling& sampling = {});

/// Needs a cost with a closed-form x-derivative; the cost is tabulated on
/// f's grid and `grid_j`.
Verdict check_grad_inclusion(const GridFunction& f, const CostSpec& cost, const Grid& grid_j,
                             std::optional<double> tol = std::nullopt);

Verdict check_cost_self_subdiff(const CostMatrix& cost);

Verdict check_local_support_iff(const GridFunction& f, const CostMatrix& cost,
                                std::size_t alpha_index, double epsilon,
                                std::optional<double> tol = std::nullopt);

/// Second differences of f are >= -1e-9 * (1 + |f|_inf).
bool is_grid_convex(const GridFunction& f, double* violation = nullptr,
                    std::size_t* where = nullptr);

inline const std::vector<double> kDefaultLambdas{0.0, 0.25, 0.5, 0.75, 1.0};

struct SuiteConfig {
  std::uint64_t seed = 20240601;
  std::size_t n = 257;
  std::size_t max_pairs = 10000;
  bool exhaustive = false;
  /// Replace the functions of hypothesis-gated checks by ones violating the hypotheses.
  bool falsify = false;
  /// Overrides every check's default membership tolerance.
  std::optional<double> tol;
  std::vector<double> lambdas = kDefaultLambdas;
};

/// Every proposition check over seeded instances, sorted by check_id.
std::vector<Verdict> run_suite(const SuiteConfig& cfg);

/// True when any verdict reports a failed conclusion.
bool any_conclusion_failed(const std::vector<Verdict>& verdicts);

}  // namespace cconv
