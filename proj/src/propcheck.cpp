#include "cconv/propcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cconv/errors.hpp"
#include "cconv/kernels.hpp"
#include "cconv/subdifferential.hpp"
#include "cconv/transform.hpp"

namespace cconv {

std::string_view to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::vacuous: return "vacuous";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::hypothesis_failed: return "hypothesis_failed";
  }
  return "unknown";
}

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::random_piecewise_linear: return "random_piecewise_linear";
    case Generator::random_smooth_fourier: return "random_smooth_fourier";
    case Generator::cconvexified_random: return "cconvexified_random";
  }
  return "unknown";
}

std::optional<Generator> parse_generator(std::string_view token) {
  for (Generator g : {Generator::random_piecewise_linear, Generator::random_smooth_fourier,
                      Generator::cconvexified_random}) {
    if (to_string(g) == token) return g;
  }
  return std::nullopt;
}

CostMatrix tabulate(const CostSource& source, const Grid& grid_i, const Grid& grid_j) {
  if (const auto* spec = std::get_if<CostSpec>(&source)) return tabulate_cost(*spec, grid_i, grid_j);
  const auto& custom = std::get<CustomCost>(source);
  return tabulate_function(custom.c, grid_i, grid_j, custom.label);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::index(std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

namespace {

constexpr std::size_t kKnots = 9;
constexpr int kModes = 5;

GridFunction random_piecewise_linear(Rng& rng, const Grid& grid, double amplitude) {
  std::vector<double> knots(kKnots);
  for (double& v : knots) v = amplitude * (2.0 * rng.uniform() - 1.0);
  const Grid knot_grid(grid.interval(), kKnots);
  return sample_function(
      [&](double x) { return interpolate(GridFunction(knot_grid, knots), x); }, grid);
}

GridFunction random_smooth_fourier(Rng& rng, const Grid& grid, double amplitude) {
  std::vector<double> a(kModes), b(kModes);
  for (int k = 0; k < kModes; ++k) {
    a[k] = 2.0 * rng.uniform() - 1.0;
    b[k] = 2.0 * rng.uniform() - 1.0;
  }
  return sample_function(
      [&](double x) {
        const double t = (x - grid.lo()) / grid.interval().length();
        double s = 0.0;
        for (int k = 0; k < kModes; ++k) {
          const double w = (k + 1) * std::numbers::pi * t;
          s += (a[k] * std::cos(w) + b[k] * std::sin(w)) / ((k + 1) * (k + 1));
        }
        return amplitude * s;
      },
      grid);
}

}  // namespace

Instance generate_instance(const InstanceConfig& cfg) {
  const Grid gi(cfg.interval_i, cfg.n);
  const Grid gj(cfg.interval_j, cfg.m);
  CostMatrix cost = tabulate(cfg.cost, gi, gj);
  Rng rng(cfg.seed);
  switch (cfg.generator) {
    case Generator::random_piecewise_linear:
      return {random_piecewise_linear(rng, gi, cfg.amplitude), std::move(cost)};
    case Generator::random_smooth_fourier:
      return {random_smooth_fourier(rng, gi, cfg.amplitude), std::move(cost)};
    case Generator::cconvexified_random: {
      GridFunction raw = random_piecewise_linear(rng, gi, cfg.amplitude);
      GridFunction f = double_c_transform(raw, cost).values;
      return {std::move(f), std::move(cost)};
    }
  }
  throw InvalidArgument("unknown generator");
}

bool is_grid_convex(const GridFunction& f, double* violation, std::size_t* where) {
  const double tol = 1e-9 * (1.0 + f.sup_norm());
  double worst = 0.0;
  std::size_t at = 0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double d2 = f[i - 1] - 2.0 * f[i] + f[i + 1];
    if (-d2 > worst) {
      worst = -d2;
      at = i;
    }
  }
  if (violation) *violation = worst;
  if (where) *where = at;
  return worst <= tol;
}

namespace {

using Witness = std::vector<std::pair<std::string, double>>;

Verdict make_verdict(std::string id, double tol) {
  Verdict v;
  v.check_id = std::move(id);
  v.tol = tol;
  return v;
}

Verdict hypothesis_failure(std::string id, std::string what, double violation, double tol,
                           Witness witness) {
  Verdict v = make_verdict(std::move(id), tol);
  v.status = VerdictStatus::hypothesis_failed;
  v.holds = false;
  v.max_violation = violation;
  v.witness = std::move(witness);
  v.notes = "hypothesis failed: " + std::move(what);
  return v;
}

// Settles status and holds from the accumulated violation.
void finish(Verdict& v, std::size_t qualifying) {
  v.holds = v.max_violation <= v.tol;
  if (!v.holds) {
    v.status = VerdictStatus::fail;
  } else if (qualifying == 0) {
    v.status = VerdictStatus::vacuous;
    v.notes = v.notes.empty() ? "vacuous" : "vacuous; " + v.notes;
  } else {
    v.status = VerdictStatus::pass;
  }
}

void record(Verdict& v, double violation, Witness witness) {
  if (violation > v.max_violation) {
    v.max_violation = violation;
    v.witness = std::move(witness);
  } else if (v.witness.empty() && violation > v.tol) {
    v.witness = std::move(witness);
  }
}

void require_cost_grid(const GridFunction& f, const CostMatrix& cost) {
  if (!(f.grid() == cost.grid_i())) throw InvalidArgument("function grid does not match cost I-grid");
  if (!f.all_finite()) throw InvalidArgument("proposition checks need finite functions");
}

struct Members {
  SlackTable slacks;
  double tol;
  bool operator()(std::size_t i, std::size_t j) const { return slacks(i, j) >= -tol; }
};

bool intersect(const Members& a, std::size_t ia, const Members& b, std::size_t ib,
               std::vector<std::size_t>* out = nullptr) {
  bool any = false;
  if (out) out->clear();
  for (std::size_t j = 0; j < a.slacks.cols; ++j) {
    if (a(ia, j) && b(ib, j)) {
      any = true;
      if (!out) return true;
      out->push_back(j);
    }
  }
  return any;
}

// Enumerates (a, b) pairs from two candidate lists, exhaustively or by seeded sampling.
template <class Fn>
void for_each_pair(const std::vector<std::size_t>& as, const std::vector<std::size_t>& bs,
                   const PairSampling& sampling, bool distinct, Fn&& fn) {
  if (as.empty() || bs.empty()) return;
  const double total = static_cast<double>(as.size()) * static_cast<double>(bs.size());
  if (sampling.exhaustive || total <= static_cast<double>(sampling.max_pairs)) {
    for (std::size_t a : as) {
      for (std::size_t b : bs) {
        if (distinct && a == b) continue;
        fn(a, b);
      }
    }
    return;
  }
  Rng rng(sampling.seed);
  for (std::size_t k = 0; k < sampling.max_pairs; ++k) {
    const std::size_t a = as[rng.index(as.size())];
    const std::size_t b = bs[rng.index(bs.size())];
    if (distinct && a == b) continue;
    fn(a, b);
  }
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::vector<std::size_t> interior_indices(std::size_t n) {
  std::vector<std::size_t> v;
  for (std::size_t i = 1; i + 1 < n; ++i) v.push_back(i);
  return v;
}

std::optional<Verdict> gate_structure(const std::string& id, const CostMatrix& cost,
                                      StructureProperty property) {
  const StructureVerdict s = check_structure(cost, property);
  if (s.holds) return std::nullopt;
  Witness w{{"max_second_difference", s.max_violation}};
  if (s.witness) {
    w.emplace_back("i", static_cast<double>(s.witness->i));
    w.emplace_back("j", static_cast<double>(s.witness->j));
  }
  return hypothesis_failure(id, "cost is not " + s.property, s.max_violation, s.tol, std::move(w));
}

std::optional<Verdict> gate_convex(const std::string& id, const GridFunction& f) {
  double violation = 0.0;
  std::size_t where = 0;
  if (is_grid_convex(f, &violation, &where)) return std::nullopt;
  return hypothesis_failure(id, "f is not convex", violation, 1e-9 * (1.0 + f.sup_norm()),
                            {{"x_index", static_cast<double>(where)}, {"second_difference", -violation}});
}

std::optional<Verdict> gate_c_convex(const std::string& id, const GridFunction& f,
                                     const CostMatrix& cost) {
  const ConvexityVerdict cv = is_c_convex(f, cost);
  if (cv.holds) return std::nullopt;
  return hypothesis_failure(id, "f is not c-convex", cv.deviation, cv.tol,
                            {{"deviation_from_fcc", cv.deviation}});
}

double lambda_checked(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("lambda must lie in [0, 1]");
  return lambda;
}

}  // namespace

Verdict check_mixture(const GridFunction& f, const GridFunction& g, const CostMatrix& cost,
                      double lambda, std::optional<double> tol) {
  require_cost_grid(f, cost);
  require_cost_grid(g, cost);
  lambda_checked(lambda);
  const GridFunction h = affine_combination(1.0 - lambda, f, lambda, g);
  const double t = tol.value_or(std::max({default_membership_tol(f, cost),
                                          default_membership_tol(g, cost),
                                          default_membership_tol(h, cost)}));
  const Members mf{support_slacks(f, cost), t};
  const Members mg{support_slacks(g, cost), t};
  const SlackTable sh = support_slacks(h, cost);

  Verdict v = make_verdict("mixture", t);
  std::size_t qualifying = 0;
  for (std::size_t i = 0; i < cost.rows(); ++i) {
    for (std::size_t j = 0; j < cost.cols(); ++j) {
      if (!mf(i, j) || !mg(i, j)) continue;
      ++qualifying;
      record(v, std::max(0.0, -sh(i, j)),
             {{"x_index", double(i)}, {"y_index", double(j)}, {"mixture_slack", sh(i, j)}});
    }
  }
  finish(v, qualifying);
  return v;
}

Verdict check_order_propagation(const GridFunction& f, const GridFunction& g,
                                const CostMatrix& cost, std::optional<double> tol,
                                const PairSampling& sampling) {
  require_cost_grid(f, cost);
  require_cost_grid(g, cost);
  const double t = tol.value_or(std::max(default_membership_tol(f, cost), default_membership_tol(g, cost)));
  const Members mf{support_slacks(f, cost), t};
  const Members mg{support_slacks(g, cost), t};

  std::vector<std::size_t> in_x;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < g[i]) in_x.push_back(i);
  }
  Verdict v = make_verdict("order_propagation", t);
  v.notes = "tested as g(v) - f(v) >= g(u) - f(u) - 2 tol";
  std::size_t qualifying = 0;
  for_each_pair(in_x, all_indices(f.size()), sampling, false, [&](std::size_t u, std::size_t w) {
    if (!intersect(mg, u, mf, w)) return;
    ++qualifying;
    const double mu = g[u] - f[u];
    const double mw = g[w] - f[w];
    record(v, std::max(0.0, mu - mw - 2.0 * t),
           {{"u_index", double(u)}, {"v_index", double(w)}, {"margin_u", mu}, {"margin_v", mw}});
  });
  finish(v, qualifying);
  return v;
}

Verdict check_subdiff_convexity(const GridFunction& f, const CostMatrix& cost,
                                std::optional<double> tol, const PairSampling& sampling) {
  const std::string id = "subdiff_convexity";
  require_cost_grid(f, cost);
  if (auto gate = gate_structure(id, cost, StructureProperty::two_affine)) return *gate;
  if (auto gate = gate_c_convex(id, f, cost)) return *gate;

  const double t = tol.value_or(default_membership_tol(f, cost));
  const double hj = cost.grid_j().step();
  const Members members{support_slacks(f, cost), t};
  const SubdifferentialMap map = subdifferential_map(members.slacks, t);

  Verdict v = make_verdict(id, t);
  v.notes = "contiguity of every set; intersection diameter <= h_J for distinct interior pairs";
  std::size_t qualifying = 0;
  for (const SubdifferentialSet& s : map.sets) {
    if (s.empty()) continue;
    ++qualifying;
    for (std::size_t k = 0; k + 1 < s.y_indices.size(); ++k) {
      const std::size_t gap = s.y_indices[k + 1] - s.y_indices[k] - 1;
      if (gap == 0) continue;
      record(v, double(gap) * hj,
             {{"x_index", double(s.x0_index)}, {"gap_after_y_index", double(s.y_indices[k])}});
    }
  }
  std::vector<std::size_t> common;
  const std::vector<std::size_t> interior = interior_indices(f.size());
  for_each_pair(interior, interior, sampling, true, [&](std::size_t a, std::size_t b) {
    if (!intersect(members, a, members, b, &common)) return;
    ++qualifying;
    const double diameter = double(common.back() - common.front()) * hj;
    record(v, std::max(0.0, diameter - hj),
           {{"x1_index", double(a)}, {"x2_index", double(b)}, {"diameter", diameter}});
  });
  finish(v, qualifying);
  return v;
}

Verdict check_set_valued_convexity(const GridFunction& f, const CostMatrix& cost, double lambda,
                                   std::optional<double> tol, const PairSampling& sampling) {
  const std::string id = "set_valued_convexity";
  require_cost_grid(f, cost);
  lambda_checked(lambda);
  if (auto gate = gate_structure(id, cost, StructureProperty::two_affine)) return *gate;
  {
    const StructureVerdict jc = check_joint_concavity(cost);
    if (!jc.holds) {
      return hypothesis_failure(id, "cost is not jointly concave (segment-tested)", jc.max_violation,
                                jc.tol, {{"max_second_difference", jc.max_violation}});
    }
  }
  if (auto gate = gate_convex(id, f)) return *gate;
  if (auto gate = gate_c_convex(id, f, cost)) return *gate;

  const double t = tol.value_or(default_membership_tol(f, cost));
  const Grid& gi = cost.grid_i();
  const Grid& gj = cost.grid_j();
  const double lx = f.lipschitz_estimate() + cost.lipschitz_x();
  const double ly = cost.lipschitz_y();
  const Members members{support_slacks(f, cost), t};
  const SubdifferentialMap map = subdifferential_map(members.slacks, t);

  std::vector<std::size_t> dom;
  for (std::size_t i = 0; i < map.dom.size(); ++i) {
    if (map.dom[i]) dom.push_back(i);
  }
  Verdict v = make_verdict(id, 4.0 * t);
  v.notes = "joint concavity segment-tested; mixtures snapped to the grid";
  std::size_t qualifying = 0;
  Rng pick(sampling.seed ^ 0x5bd1e995ULL);
  auto probes = [&](const SubdifferentialSet& s) {
    return std::vector<std::size_t>{s.y_indices.front(), s.y_indices.back(),
                                    s.y_indices[pick.index(s.y_indices.size())]};
  };
  for_each_pair(dom, dom, sampling, false, [&](std::size_t i1, std::size_t i2) {
    const double xm = (1.0 - lambda) * gi.point(i1) + lambda * gi.point(i2);
    const std::size_t im = gi.nearest_index(xm);
    const double dx = std::abs(gi.point(im) - xm);
    for (std::size_t a : probes(map.sets[i1])) {
      for (std::size_t b : probes(map.sets[i2])) {
        ++qualifying;
        const double z = (1.0 - lambda) * gj.point(a) + lambda * gj.point(b);
        const std::size_t jz = gj.nearest_index(z);
        const double dy = std::abs(gj.point(jz) - z);
        const double slack = members.slacks(im, jz);
        record(v, std::max(0.0, -slack - lx * dx - 2.0 * ly * dy),
               {{"x1_index", double(i1)}, {"x2_index", double(i2)}, {"y_a", gj.point(a)},
                {"y_b", gj.point(b)}, {"slack", slack}});
      }
    }
  });
  finish(v, qualifying);
  return v;
}

Verdict check_intersection_inclusion(const GridFunction& f, const CostMatrix& cost,
                                     const std::vector<double>& lambdas, std::optional<double> tol,
                                     const PairSampling& sampling) {
  const std::string id = "intersection_inclusion";
  require_cost_grid(f, cost);
  for (double l : lambdas) lambda_checked(l);
  if (auto gate = gate_structure(id, cost, StructureProperty::one_concave)) return *gate;
  if (auto gate = gate_convex(id, f)) return *gate;
  if (auto gate = gate_c_convex(id, f, cost)) return *gate;

  const double t = tol.value_or(default_membership_tol(f, cost));
  const Grid& gi = cost.grid_i();
  const double lx = f.lipschitz_estimate() + cost.lipschitz_x();
  const Members members{support_slacks(f, cost), t};

  Verdict v = make_verdict(id, 4.0 * t);
  v.notes = "mixture points snapped to the grid";
  std::size_t qualifying = 0;
  std::vector<std::size_t> common;
  const std::vector<std::size_t> interior = interior_indices(f.size());
  for_each_pair(interior, interior, sampling, true, [&](std::size_t i1, std::size_t i2) {
    if (!intersect(members, i1, members, i2, &common)) return;
    ++qualifying;
    for (double lambda : lambdas) {
      const double xm = (1.0 - lambda) * gi.point(i1) + lambda * gi.point(i2);
      const std::size_t im = gi.nearest_index(xm);
      const double dx = std::abs(gi.point(im) - xm);
      for (std::size_t j : common) {
        const double slack = members.slacks(im, j);
        record(v, std::max(0.0, -slack - lx * dx),
               {{"x1_index", double(i1)}, {"x2_index", double(i2)}, {"lambda", lambda},
                {"y_index", double(j)}, {"slack", slack}});
      }
    }
  });
  finish(v, qualifying);
  return v;
}

Verdict check_domain_interval(const GridFunction& f, const CostMatrix& cost,
                              std::optional<double> tol, const PairSampling& sampling) {
  const std::string id = "domain_interval";
  require_cost_grid(f, cost);
  if (auto gate = gate_structure(id, cost, StructureProperty::one_concave)) return *gate;
  if (auto gate = gate_convex(id, f)) return *gate;

  const double t = tol.value_or(default_membership_tol(f, cost));
  const Members members{support_slacks(f, cost), t};
  std::vector<double> best(f.size(), -kPlusInf);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < cost.cols(); ++j) best[i] = std::max(best[i], members.slacks(i, j));
  }

  Verdict v = make_verdict(id, 4.0 * t);
  std::size_t qualifying = 0;
  const std::vector<std::size_t> all = all_indices(f.size());
  for_each_pair(all, all, sampling, true, [&](std::size_t a, std::size_t b) {
    if (a > b || !intersect(members, a, members, b)) return;
    ++qualifying;
    for (std::size_t p = a + 1; p < b; ++p) {
      record(v, std::max(0.0, -best[p]),
             {{"x1_index", double(a)}, {"x2_index", double(b)}, {"empty_at_index", double(p)},
              {"best_slack", best[p]}});
    }
  });
  finish(v, qualifying);
  return v;
}

Verdict check_grad_inclusion(const GridFunction& f, const CostSpec& spec, const Grid& grid_j,
                             std::optional<double> tol) {
  const Grid& gi = f.grid();
  if (!spec.dx(gi.point(0), grid_j.point(0))) {
    throw InvalidArgument("gradient inclusion needs a cost with a closed-form x-derivative");
  }
  const CostMatrix cost = tabulate_cost(spec, gi, grid_j);
  require_cost_grid(f, cost);
  const double t = tol.value_or(default_membership_tol(f, cost));
  const double h = gi.step();

  // Curvature bounds from second differences; they control how far a grid
  // c-subgradient can sit from the tangent slope.
  double kf = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    kf = std::max(kf, std::abs(f[i - 1] - 2.0 * f[i] + f[i + 1]));
  }
  double kc = 0.0;
  for (std::size_t i = 1; i + 1 < cost.rows(); ++i) {
    for (std::size_t j = 0; j < cost.cols(); ++j) {
      kc = std::max(kc, std::abs(cost(i - 1, j) - 2.0 * cost(i, j) + cost(i + 1, j)));
    }
  }
  const double constant = 2.0 * (kf + kc) / (h * h) + t / (h * h);
  const SlackTable slacks = support_slacks(f, cost);

  Verdict v = make_verdict("grad_inclusion", constant * h);
  {
    std::ostringstream os;
    os.precision(17);
    os << "|dc/dx - f'| <= C*h with C = " << constant << ", h = " << h;
    v.notes = os.str();
  }
  std::size_t qualifying = 0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double fprime = (f[i + 1] - f[i - 1]) / (2.0 * h);
    for (std::size_t j = 0; j < cost.cols(); ++j) {
      if (slacks(i, j) < -t) continue;
      ++qualifying;
      const double dev = std::abs(*spec.dx(gi.point(i), grid_j.point(j)) - fprime);
      record(v, dev, {{"x_index", double(i)}, {"y_index", double(j)}, {"f_prime", fprime}});
    }
  }
  finish(v, qualifying);
  return v;
}

Verdict check_cost_self_subdiff(const CostMatrix& cost) {
  Verdict v = make_verdict("cost_self_subdiff", 0.0);
  v.notes = "f = c(., y_j); support slack must be exactly 0";
  std::size_t qualifying = 0;
  std::vector<double> column(cost.rows());
  std::vector<double> col_min(cost.cols());
  for (std::size_t j = 0; j < cost.cols(); ++j) {
    for (std::size_t z = 0; z < cost.rows(); ++z) column[z] = cost(z, j);
    kernels::min_over_rows(cost, column, 0, cost.rows(), col_min);
    for (std::size_t i = 0; i < cost.rows(); ++i) {
      ++qualifying;
      const double slack = col_min[j] - (column[i] - cost(i, j));
      if (slack != 0.0) {
        record(v, std::abs(slack), {{"x_index", double(i)}, {"y_index", double(j)}, {"slack", slack}});
      }
    }
  }
  finish(v, qualifying);
  return v;
}

Verdict check_local_support_iff(const GridFunction& f, const CostMatrix& cost,
                                std::size_t alpha_index, double epsilon,
                                std::optional<double> tol) {
  require_cost_grid(f, cost);
  if (!cost.grid_i().is_interior(alpha_index)) throw InvalidArgument("alpha must be an interior point");
  const double t = tol.value_or(default_membership_tol(f, cost));
  const LocalWindow window{alpha_index, epsilon};
  const SubdifferentialSet local = local_c_subdifferential(f, cost, window, t);
  const LocalConjugate lc = local_double_conjugate(f, cost, window, t);
  const bool support = !local.empty();
  const double gap = f[alpha_index] - lc.value;
  const bool equal = std::abs(gap) <= t;

  Verdict v = make_verdict("local_support_iff", 0.0);
  v.witness = {{"alpha_index", double(alpha_index)}, {"epsilon", epsilon}, {"f_alpha", f[alpha_index]},
               {"f_l_cc_alpha", lc.value}, {"gap", gap}, {"membership_tol", t}};
  v.max_violation = support == equal ? 0.0 : 1.0;
  v.notes = support ? "branch=support" : "branch=no-support";
  finish(v, 1);
  return v;
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_lambda(double lambda) {
  std::ostringstream os;
  os << lambda;
  return os.str();
}

class SuiteRunner {
 public:
  explicit SuiteRunner(const SuiteConfig& cfg) : cfg_(cfg) {}

  PairSampling sampling(const std::string& id) const {
    return PairSampling{cfg_.max_pairs, cfg_.exhaustive, cfg_.seed ^ fnv1a(id)};
  }

  void add(std::string id, Verdict v) {
    v.check_id = std::move(id);
    out_.push_back(std::move(v));
  }

  std::vector<Verdict> take() {
    std::stable_sort(out_.begin(), out_.end(),
                     [](const Verdict& a, const Verdict& b) { return a.check_id < b.check_id; });
    return std::move(out_);
  }

 private:
  const SuiteConfig& cfg_;
  std::vector<Verdict> out_;
};

GridFunction cconvexified(std::uint64_t seed, const CostMatrix& cost) {
  Rng rng(seed);
  const GridFunction raw = random_piecewise_linear(rng, cost.grid_i(), 1.0);
  return double_c_transform(raw, cost).values;
}

GridFunction raw_piecewise_linear(std::uint64_t seed, const Grid& grid) {
  Rng rng(seed);
  return random_piecewise_linear(rng, grid, 1.0);
}

GridFunction neg_square(const Grid& grid) {
  return sample_function([](double x) { return -x * x; }, grid);
}

}  // namespace

std::vector<Verdict> run_suite(const SuiteConfig& cfg) {
  if (cfg.n < 5) throw InvalidArgument("suite needs at least 5 grid points");
  for (double l : cfg.lambdas) lambda_checked(l);
  SuiteRunner run(cfg);
  const std::size_t n = cfg.n;
  const std::uint64_t s = cfg.seed;
  const std::optional<double> tol = cfg.tol;

  const Grid unit(Interval(-1.0, 1.0), n);
  const Grid wide(Interval(-2.0, 2.0), 2 * n - 1);
  const CostSpec bilinear = CostSpec::bilinear();
  const CostSpec neg_quadratic = CostSpec::neg_quadratic();
  const CostMatrix bil = tabulate_cost(bilinear, unit, unit);
  const CostMatrix nq = tabulate_cost(neg_quadratic, unit, unit);

  {
    const Grid half(Interval(0.0, 0.5), n);
    run.add("cost_self_subdiff/bilinear", check_cost_self_subdiff(bil));
    run.add("cost_self_subdiff/neg_quadratic", check_cost_self_subdiff(nq));
    run.add("cost_self_subdiff/reflector",
            check_cost_self_subdiff(tabulate_cost(CostSpec::reflector(), half, half)));
  }

  for (const auto* cost : {&bil, &nq}) {
    const std::string name = cost == &bil ? "bilinear" : "neg_quadratic";
    const GridFunction f = cconvexified(s, *cost);
    const GridFunction g = cconvexified(s + 1, *cost);
    for (double lambda : cfg.lambdas) {
      run.add("mixture/" + name + "/lambda=" + format_lambda(lambda),
              check_mixture(f, g, *cost, lambda, tol));
    }
    const std::string id = "order_propagation/" + name;
    run.add(id, check_order_propagation(f, g, *cost, tol, run.sampling(id)));
  }

  {
    const GridFunction f = cfg.falsify ? neg_square(unit) : cconvexified(s + 2, bil);
    std::string id = "subdiff_convexity/bilinear";
    run.add(id, check_subdiff_convexity(f, bil, tol, run.sampling(id)));

    const CostMatrix warped = tabulate_function(
        [](double x, double y) { return std::sin(x) * y + x * x; }, unit, unit, "sin(x)*y+x^2");
    const GridFunction fw = cfg.falsify ? neg_square(unit) : cconvexified(s + 3, warped);
    id = "subdiff_convexity/sin_affine";
    run.add(id, check_subdiff_convexity(fw, warped, tol, run.sampling(id)));
  }

  {
    // Jointly concave and 2-affine forces c = a*y + b(x) with constant a.
    const CostMatrix affine = tabulate_function(
        [](double x, double y) { return 0.7 * y + 0.3 * x; }, unit, unit, "0.7y+0.3x");
    const GridFunction f = cfg.falsify ? neg_square(unit) : cconvexified(s + 4, affine);
    for (double lambda : cfg.lambdas) {
      const std::string id = "set_valued_convexity/affine/lambda=" + format_lambda(lambda);
      run.add(id, check_set_valued_convexity(f, affine, lambda, tol, run.sampling(id)));
    }
  }

  {
    const CostMatrix nq_wide = tabulate_cost(neg_quadratic, unit, wide);
    const GridFunction convex_f = cfg.falsify ? neg_square(unit) : cconvexified(s + 5, bil);
    const GridFunction square = cfg.falsify ? neg_square(unit)
                                            : sample_function([](double x) { return x * x; }, unit);
    const GridFunction absolute = cfg.falsify ? neg_square(unit)
                                              : sample_function([](double x) { return std::abs(x); }, unit);
    struct Case {
      std::string name;
      const GridFunction* f;
      const CostMatrix* cost;
    };
    const std::vector<Case> cases{{"bilinear/random", &convex_f, &bil},
                                  {"neg_quadratic/random", &convex_f, &nq_wide},
                                  {"neg_quadratic/square", &square, &nq_wide}};
    for (const Case& c : cases) {
      const std::string id = "intersection_inclusion/" + c.name;
      run.add(id, check_intersection_inclusion(*c.f, *c.cost, cfg.lambdas, tol, run.sampling(id)));
    }
    const std::vector<Case> domain_cases{{"bilinear/random", &convex_f, &bil},
                                         {"neg_quadratic/random", &convex_f, &nq_wide},
                                         {"neg_quadratic/abs", &absolute, &nq_wide}};
    for (const Case& c : domain_cases) {
      const std::string id = "domain_interval/" + c.name;
      run.add(id, check_domain_interval(*c.f, *c.cost, tol, run.sampling(id)));
    }
  }

  {
    const Grid wide3(Interval(-3.0, 3.0), 3 * n - 2);
    Rng rng(s + 6);
    const GridFunction bump = random_smooth_fourier(rng, unit, 0.1);
    const GridFunction f = sample_function(
        [&](double x) { return x * x + interpolate(bump, x); }, unit);
    run.add("grad_inclusion/bilinear", check_grad_inclusion(f, bilinear, wide3, tol));
    run.add("grad_inclusion/neg_quadratic", check_grad_inclusion(f, neg_quadratic, wide3, tol));

    const Grid small(Interval(0.0, 0.4), n);
    const CostSpec reflector = CostSpec::reflector();
    const GridFunction slice = sample_function([&](double x) { return reflector(x, 0.2); }, small);
    run.add("grad_inclusion/reflector", check_grad_inclusion(slice, reflector, small, tol));
  }

  {
    const GridFunction kink = sample_function([](double x) { return -std::abs(x); }, unit);
    run.add("local_support_iff/neg_abs/alpha=0.5",
            check_local_support_iff(kink, bil, unit.nearest_index(0.5), 0.25, tol));
    run.add("local_support_iff/neg_abs/alpha=0",
            check_local_support_iff(kink, bil, unit.nearest_index(0.0), 0.25, tol));

    const GridFunction f = raw_piecewise_linear(s + 7, unit);
    Rng rng(s + 8);
    for (int k = 0; k < 8; ++k) {
      const std::size_t alpha = 1 + rng.index(n - 2);
      const double eps = rng.uniform(0.05, 0.5);
      run.add("local_support_iff/random/" + std::to_string(k),
              check_local_support_iff(f, bil, alpha, eps, tol));
    }
  }

  return run.take();
}

bool any_conclusion_failed(const std::vector<Verdict>& verdicts) {
  return std::any_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.conclusion_failed(); });
}

}  // namespace cconv
