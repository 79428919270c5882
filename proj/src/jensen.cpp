#include "cconv/jensen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cconv/errors.hpp"

namespace cconv {

JensenFunction JensenFunction::analytic(std::function<double(double)> f, const Grid& grid) {
  if (!f) throw InvalidArgument("analytic function is empty");
  GridFunction samples = sample_function(f, grid);
  return JensenFunction(std::move(f), std::move(samples), 0.0);
}

JensenFunction JensenFunction::tabulated(GridFunction samples) {
  if (!samples.all_finite()) throw InvalidArgument("Jensen bounds need a finite function");
  const double err = 2.0 * samples.lipschitz_estimate() * samples.grid().step();
  return JensenFunction({}, std::move(samples), err);
}

double JensenFunction::operator()(double x) const {
  if (eval_) return eval_(x);
  return interpolate(samples_, x);
}

double membership_slack(const JensenSetup& setup, double point, double y) {
  const GridFunction& fs = setup.f.samples();
  const Grid& g = fs.grid();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!std::isfinite(fs[k])) continue;
    m = std::min(m, fs[k] - setup.cost(g.point(k), y));
  }
  return m - (setup.f(point) - setup.cost(point, y));
}

std::optional<double> find_witness(const JensenSetup& setup, double point, double tol) {
  double best = -std::numeric_limits<double>::infinity();
  std::optional<double> arg;
  for (std::size_t j = 0; j < setup.grid_j.size(); ++j) {
    const double y = setup.grid_j.point(j);
    const double s = membership_slack(setup, point, y);
    if (s > best) {
      best = s;
      arg = y;
    }
  }
  if (!arg || best < -tol) return std::nullopt;
  return arg;
}

namespace {

double effective_tol(const JensenSetup& setup, double tol) {
  return tol + (setup.f.interpolated() ? setup.f.interpolation_error() : 0.0);
}

void require_inside(const JensenSetup& setup, double x, const char* what) {
  if (!setup.f.grid().interval().contains(x)) {
    std::ostringstream os;
    os.precision(17);
    os << what << " " << x << " lies outside the domain of f";
    throw InvalidArgument(os.str());
  }
}

// Largest change of c over one step of grid_j, on the grid of f and at `point`.
double witness_allowance(const JensenSetup& setup, double point) {
  const Grid& gj = setup.grid_j;
  const Grid& g = setup.f.grid();
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < gj.size(); ++j) {
    const double y0 = gj.point(j), y1 = gj.point(j + 1);
    worst = std::max(worst, std::abs(setup.cost(point, y1) - setup.cost(point, y0)));
    for (std::size_t k = 0; k < g.size(); ++k) {
      worst = std::max(worst, std::abs(setup.cost(g.point(k), y1) - setup.cost(g.point(k), y0)));
    }
  }
  return worst;
}

// Widens `eff_tol` by the grid_j allowance when the witness is searched for.
double resolve_witness(const JensenSetup& setup, double point, std::optional<double> y,
                       double& eff_tol) {
  if (y) return *y;
  eff_tol += witness_allowance(setup, point);
  const std::optional<double> found = find_witness(setup, point, eff_tol);
  if (!found) {
    std::ostringstream os;
    os.precision(17);
    os << "no admissible witness: no grid y is a c-subgradient at " << point;
    throw NoWitnessError(os.str());
  }
  return *found;
}

JensenReport gap_report(const JensenSetup& setup, const DiscreteMeasure& mu,
                        std::optional<double> y, double tol) {
  for (const Atom& a : mu.atoms()) require_inside(setup, a.x, "atom");
  const double b = barycenter(mu);
  JensenReport r;
  r.tol = effective_tol(setup, tol);
  r.interpolated = setup.f.interpolated();
  r.y_witness = resolve_witness(setup, b, y, r.tol);

  double f_mean = 0.0;
  double c_mean = 0.0;
  for (const Atom& a : mu.canonical_order()) {
    f_mean += a.p * setup.f(a.x);
    c_mean += a.p * setup.cost(a.x, r.y_witness);
  }
  r.lhs = f_mean - setup.f(b);
  r.rhs = c_mean - setup.cost(b, r.y_witness);
  r.slack = r.lhs - r.rhs;
  r.holds = r.slack >= -r.tol;
  r.membership_slack = membership_slack(setup, b, r.y_witness);
  r.hypothesis_verified = r.membership_slack >= -r.tol;
  if (!r.hypothesis_verified) r.warnings.emplace_back("hypothesis-unverified: y is not a c-subgradient at the barycenter");
  if (r.interpolated) r.warnings.emplace_back("f interpolated off-grid");
  return r;
}

}  // namespace

JensenReport discrete_jensen_gap(const JensenSetup& setup, const DiscreteMeasure& mu,
                                 std::optional<double> y, double tol) {
  JensenReport r = gap_report(setup, mu, y, tol);
  const double b = barycenter(mu);
  if (!setup.f.grid().interval().contains_open(b)) {
    r.warnings.emplace_back("barycenter at an endpoint of the domain");
  }
  return r;
}

JensenReport midpoint_bound(const JensenSetup& setup, double a, double b, std::optional<double> y,
                            double tol) {
  return discrete_jensen_gap(setup, DiscreteMeasure({{a, 0.5}, {b, 0.5}}), y, tol);
}

Verdict support_concavity_check(const JensenSetup& setup, double a, double b,
                                std::optional<double> y, double tol) {
  require_inside(setup, a, "endpoint");
  require_inside(setup, b, "endpoint");
  const double mid = 0.5 * a + 0.5 * b;
  double eff = effective_tol(setup, tol);
  const double yw = resolve_witness(setup, mid, y, eff);
  auto g = [&](double x) { return setup.cost(x, yw) - setup.f(x); };

  Verdict v;
  v.check_id = "support_concavity";
  v.tol = eff;
  const double member = membership_slack(setup, mid, yw);
  if (member < -eff) {
    v.status = VerdictStatus::hypothesis_failed;
    v.holds = false;
    v.max_violation = -member;
    v.witness = {{"y", yw}, {"membership_slack", member}};
    v.notes = "y is not a c-subgradient at the midpoint";
    return v;
  }
  const double slack = g(mid) - 0.5 * (g(a) + g(b));
  v.max_violation = std::max(0.0, -slack);
  v.holds = v.max_violation <= v.tol;
  v.status = v.holds ? VerdictStatus::pass : VerdictStatus::fail;
  v.witness = {{"a", a}, {"b", b}, {"y", yw}, {"slack", slack}};
  return v;
}

JensenReport integral_jensen_bound(const JensenSetup& setup, std::optional<double> xi,
                                   std::optional<double> y, QuadratureRule rule, double tol) {
  const Grid& g = setup.f.grid();
  const double a = g.lo();
  const double b = g.hi();
  double point = xi.value_or(0.5 * (a + b));
  require_inside(setup, point, "xi");

  JensenReport r;
  const std::size_t k = g.nearest_index(point);
  if (std::abs(g.point(k) - point) > 1e-12 * g.interval().length()) {
    std::ostringstream os;
    os.precision(17);
    os << "xi " << point << " snapped to grid point " << g.point(k);
    r.warnings.push_back(os.str());
  }
  point = g.point(k);

  r.tol = effective_tol(setup, tol);
  r.interpolated = setup.f.interpolated();
  r.y_witness = resolve_witness(setup, point, y, r.tol);
  const double yw = r.y_witness;
  const double c_xi = setup.cost(point, yw);
  const GridFunction cost_gap = sample_function([&](double x) { return setup.cost(x, yw) - c_xi; }, g);

  r.lhs = quadrature(setup.f.samples(), rule) - setup.f.samples()[k] * (b - a);
  r.rhs = quadrature(cost_gap, rule);
  r.slack = r.lhs - r.rhs;
  r.holds = r.slack >= -r.tol;
  r.membership_slack = membership_slack(setup, point, yw);
  r.hypothesis_verified = r.membership_slack >= -r.tol;
  if (!r.hypothesis_verified) r.warnings.emplace_back("hypothesis-unverified: y is not a c-subgradient at xi");
  return r;
}

JensenReport weighted_integral_bound(const JensenSetup& setup, const DiscreteMeasure& mu,
                                     std::optional<double> y, double tol) {
  const double b = barycenter(mu);
  if (!setup.f.grid().interval().contains_open(b)) {
    std::ostringstream os;
    os.precision(17);
    os << "barycenter " << b << " must lie in the open interval";
    throw InvalidArgument(os.str());
  }
  return gap_report(setup, mu, y, tol);
}

Verdict classical_reduction_check(const JensenSetup& setup, double tol) {
  const Grid& g = setup.f.grid();
  const CostMatrix table = tabulate_cost(setup.cost, g, setup.grid_j);
  const StructureVerdict affine = check_structure(table, StructureProperty::one_affine);
  if (!affine.holds) {
    throw InvalidArgument("classical reduction needs a 1-affine cost (max second difference " +
                          std::to_string(affine.max_violation) + ")");
  }
  const double a = g.lo();
  const double b = g.hi();
  const double mid = 0.5 * (a + b);

  Verdict v;
  v.check_id = "classical_reduction";
  v.tol = tol;
  double worst_rhs = 0.0;
  double worst_y = setup.grid_j.point(0);
  for (std::size_t j = 0; j < setup.grid_j.size(); ++j) {
    const double y = setup.grid_j.point(j);
    const GridFunction col = sample_function([&](double x) { return setup.cost(x, y); }, g);
    const double r = std::abs(quadrature(col) - setup.cost(mid, y) * (b - a));
    if (r > worst_rhs) {
      worst_rhs = r;
      worst_y = y;
    }
  }
  const double mean = quadrature(setup.f.samples()) / (b - a);
  const double jensen_gap = setup.f(mid) - mean;
  v.max_violation = std::max(worst_rhs, std::max(0.0, jensen_gap));
  v.holds = v.max_violation <= v.tol;
  v.status = v.holds ? VerdictStatus::pass : VerdictStatus::fail;
  v.witness = {{"max_cost_side", worst_rhs}, {"y", worst_y}, {"f_mid", setup.f(mid)}, {"mean_f", mean}};
  return v;
}

}  // namespace cconv
