#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cconv/errors.hpp"
#include "cconv/propcheck.hpp"
#include "cconv/subdifferential.hpp"
#include "cconv/transform.hpp"

using namespace cconv;

namespace {

double oracle_slack(const GridFunction& f, const CostMatrix& c, std::size_t i, std::size_t j) {
  double best = INFINITY;
  for (std::size_t z = 0; z < f.size(); ++z) best = std::min(best, f[z] - f[i] - c(z, j) + c(i, j));
  return best;
}

GridFunction sampled(const Grid& g, double (*fn)(double)) { return sample_function(fn, g); }

double square(double x) { return x * x; }
double neg_square(double x) { return -x * x; }
double absolute(double x) { return std::abs(x); }
double neg_abs(double x) { return -std::abs(x); }

}  // namespace

TEST_CASE("generator names round-trip") {
  for (Generator g : {Generator::random_piecewise_linear, Generator::random_smooth_fourier,
                      Generator::cconvexified_random}) {
    CHECK(parse_generator(to_string(g)) == g);
  }
  CHECK_FALSE(parse_generator("gaussian").has_value());
  CHECK(to_string(VerdictStatus::hypothesis_failed) == "hypothesis_failed");
}

TEST_CASE("rng is reproducible and in range") {
  Rng a(7), b(7), c(8);
  bool differs = false;
  for (int k = 0; k < 1000; ++k) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    if (x != c.uniform()) differs = true;
  }
  CHECK(differs);
  for (int k = 0; k < 1000; ++k) CHECK(a.index(5) < 5);
}

TEST_CASE("instance generation") {
  InstanceConfig cfg;
  cfg.n = 65;
  cfg.m = 65;
  for (Generator g : {Generator::random_piecewise_linear, Generator::random_smooth_fourier,
                      Generator::cconvexified_random}) {
    cfg.generator = g;
    const Instance x = generate_instance(cfg);
    const Instance y = generate_instance(cfg);
    CHECK(std::equal(x.f.values().begin(), x.f.values().end(), y.f.values().begin()));
    CHECK(x.cost.entries() == y.cost.entries());
    InstanceConfig other = cfg;
    other.seed = cfg.seed + 1;
    const Instance z = generate_instance(other);
    CHECK_FALSE(std::equal(x.f.values().begin(), x.f.values().end(), z.f.values().begin()));
  }

  cfg.generator = Generator::cconvexified_random;
  cfg.cost = CostSpec::neg_quadratic();
  CHECK(is_c_convex(generate_instance(cfg).f, generate_instance(cfg).cost).holds);

  cfg.cost = CostSpec::bilinear();
  cfg.amplitude = 0.0;
  const Instance flat = generate_instance(cfg);
  for (double v : flat.f.values()) CHECK(v == 0.0);

  cfg.cost = CustomCost{[](double x, double y) { return std::cos(x - y); }, "cos"};
  CHECK(generate_instance(cfg).cost.label() == "cos");
}

TEST_CASE("grid convexity") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 41);
  CHECK(is_grid_convex(sampled(g, square)));
  CHECK(is_grid_convex(sampled(g, absolute)));
  double violation = 0.0;
  std::size_t where = 0;
  CHECK_FALSE(is_grid_convex(sampled(g, neg_abs), &violation, &where));
  CHECK(where == 20);
  CHECK(violation == doctest::Approx(2.0 * g.step()));
}

TEST_CASE("cost self-subdifferential is exact") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 33);
  const Grid half = make_uniform_grid(0.0, 0.5, 33);
  for (const CostMatrix& c : {tabulate_cost(CostSpec::bilinear(), g, g), tabulate_cost(CostSpec::neg_quadratic(), g, g),
                              tabulate_cost(CostSpec::reflector(), half, half)}) {
    const Verdict v = check_cost_self_subdiff(c);
    CHECK(v.status == VerdictStatus::pass);
    CHECK(v.max_violation == 0.0);
    CHECK(v.tol == 0.0);
  }
}

TEST_CASE("mixture agrees with a brute-force oracle") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 41);
  const CostMatrix c = tabulate_cost(CostSpec::neg_quadratic(), g, g);
  InstanceConfig cfg;
  cfg.n = cfg.m = 41;
  cfg.cost = CostSpec::neg_quadratic();
  const GridFunction f = generate_instance(cfg).f;
  cfg.seed = 99;
  const GridFunction h = generate_instance(cfg).f;
  for (double lambda : kDefaultLambdas) {
    const Verdict v = check_mixture(f, h, c, lambda);
    const GridFunction mix = affine_combination(1.0 - lambda, f, lambda, h);
    double worst = 0.0;
    std::size_t qualifying = 0;
    for (std::size_t i = 0; i < 41; ++i) {
      for (std::size_t j = 0; j < 41; ++j) {
        if (oracle_slack(f, c, i, j) < -v.tol || oracle_slack(h, c, i, j) < -v.tol) continue;
        ++qualifying;
        worst = std::max(worst, -oracle_slack(mix, c, i, j));
      }
    }
    CHECK(qualifying > 0);
    CHECK(v.status == VerdictStatus::pass);
    CHECK(v.max_violation == doctest::Approx(worst).epsilon(1e-12).scale(1.0));
  }
  CHECK_THROWS_AS(check_mixture(f, h, c, 1.5), InvalidArgument);

  // Slopes +-0.5 lie outside J, so only one endpoint set of each is nonempty.
  const Grid narrow = make_uniform_grid(-0.4, 0.4, 17);
  const CostMatrix bil = tabulate_cost(CostSpec::bilinear(), g, narrow);
  const GridFunction up = sample_function([](double x) { return 0.5 * x; }, g);
  const GridFunction down = sample_function([](double x) { return -0.5 * x; }, g);
  const Verdict vac = check_mixture(up, down, bil, 0.5);
  CHECK(vac.status == VerdictStatus::vacuous);
  CHECK(vac.holds);
  CHECK(vac.notes.find("vacuous") != std::string::npos);
}

TEST_CASE("order propagation") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 65);
  const CostMatrix c = tabulate_cost(CostSpec::bilinear(), g, g);
  InstanceConfig cfg;
  cfg.n = cfg.m = 65;
  const GridFunction f = generate_instance(cfg).f;
  cfg.seed = 5;
  const GridFunction h = generate_instance(cfg).f;
  CHECK_FALSE(check_order_propagation(f, h, c).conclusion_failed());
  const Verdict v = check_order_propagation(f, h, c, std::nullopt, PairSampling{10, false, 3});
  CHECK_FALSE(v.conclusion_failed());

  // f < g nowhere: nothing qualifies.
  CHECK(check_order_propagation(f, f, c).status == VerdictStatus::vacuous);
}

TEST_CASE("subdifferential convexity and its hypotheses") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 65);
  const Grid wide = make_uniform_grid(-2.0, 2.0, 129);
  const CostMatrix c = tabulate_cost(CostSpec::bilinear(), g, wide);
  const Verdict ok = check_subdiff_convexity(sampled(g, square), c);
  CHECK(ok.status == VerdictStatus::pass);

  const Verdict concave = check_subdiff_convexity(sampled(g, neg_square), c);
  CHECK(concave.status == VerdictStatus::hypothesis_failed);
  CHECK(concave.notes.find("c-convex") != std::string::npos);

  const Verdict not_affine = check_subdiff_convexity(sampled(g, square), tabulate_cost(CostSpec::neg_quadratic(), g, g));
  CHECK(not_affine.status == VerdictStatus::hypothesis_failed);
  CHECK(not_affine.notes.find("cost is not") != std::string::npos);
  CHECK_FALSE(not_affine.conclusion_failed());
}

TEST_CASE("set-valued convexity") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 33);
  const CostMatrix affine =
      tabulate_function([](double x, double y) { return 0.7 * y + 0.3 * x; }, g, g, "affine");
  InstanceConfig cfg;
  cfg.n = cfg.m = 33;
  cfg.cost = CustomCost{[](double x, double y) { return 0.7 * y + 0.3 * x; }, "affine"};
  const GridFunction f = generate_instance(cfg).f;
  for (double lambda : kDefaultLambdas) {
    CHECK(check_set_valued_convexity(f, affine, lambda).status != VerdictStatus::fail);
  }
  const Verdict bil = check_set_valued_convexity(sampled(g, square), tabulate_cost(CostSpec::bilinear(), g, g), 0.5);
  CHECK(bil.status == VerdictStatus::hypothesis_failed);
  CHECK(bil.notes.find("jointly concave") != std::string::npos);
  CHECK(check_set_valued_convexity(sampled(g, neg_square), affine, 0.5).status == VerdictStatus::hypothesis_failed);
}

TEST_CASE("intersection inclusion and domain interval") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 49);
  const Grid wide = make_uniform_grid(-2.0, 2.0, 97);
  const CostMatrix nq = tabulate_cost(CostSpec::neg_quadratic(), g, wide);
  const CostMatrix bil = tabulate_cost(CostSpec::bilinear(), g, wide);

  const Verdict sq = check_intersection_inclusion(sampled(g, square), nq, kDefaultLambdas);
  CHECK(sq.status == VerdictStatus::pass);
  CHECK(check_intersection_inclusion(sampled(g, square), bil, kDefaultLambdas).status == VerdictStatus::pass);
  CHECK(check_intersection_inclusion(sampled(g, neg_square), nq, kDefaultLambdas).status ==
        VerdictStatus::hypothesis_failed);

  // Affine pieces of |x| share the subgradient +-1 under the bilinear cost.
  const Verdict dom = check_domain_interval(sampled(g, absolute), bil);
  CHECK(dom.status == VerdictStatus::pass);
  CHECK(dom.max_violation == 0.0);
  const Verdict exhaustive = check_domain_interval(sampled(g, absolute), bil, std::nullopt, PairSampling{1, true, 1});
  CHECK(exhaustive.status == VerdictStatus::pass);
  // Under neg_quadratic, f - c(., y) is strictly convex, so distinct points share no subgradient.
  const Verdict twisted = check_domain_interval(sampled(g, absolute), nq);
  CHECK(twisted.holds);
  CHECK(twisted.status == VerdictStatus::vacuous);
  CHECK(check_domain_interval(sampled(g, neg_abs), nq).status == VerdictStatus::hypothesis_failed);
}

TEST_CASE("gradient inclusion") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 129);
  const Grid wide = make_uniform_grid(-3.0, 3.0, 385);
  for (const CostSpec& c : {CostSpec::bilinear(), CostSpec::neg_quadratic()}) {
    const Verdict v = check_grad_inclusion(sampled(g, square), c, wide);
    CHECK(v.status == VerdictStatus::pass);
    CHECK(v.notes.find("C = ") != std::string::npos);
  }
  // Constant C shrinks the allowed deviation linearly with h.
  const Grid fine = make_uniform_grid(-1.0, 1.0, 257);
  const Grid fine_wide = make_uniform_grid(-3.0, 3.0, 769);
  const double coarse_tol = check_grad_inclusion(sampled(g, square), CostSpec::bilinear(), wide).tol;
  const double fine_tol = check_grad_inclusion(sampled(fine, square), CostSpec::bilinear(), fine_wide).tol;
  CHECK(fine_tol < 0.6 * coarse_tol);

  const CostSpec no_dx = CostSpec::translation([](double t) { return -std::abs(t); }, {}, "neg_abs");
  CHECK_THROWS_AS(check_grad_inclusion(sampled(g, square), no_dx, wide), InvalidArgument);
}

TEST_CASE("local support iff local double conjugate equality") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 257);
  const CostMatrix c = tabulate_cost(CostSpec::bilinear(), g, g);
  const GridFunction kink = sampled(g, neg_abs);

  const Verdict smooth = check_local_support_iff(kink, c, g.nearest_index(0.5), 0.25);
  CHECK(smooth.status == VerdictStatus::pass);
  CHECK(smooth.notes == "branch=support");

  const Verdict corner = check_local_support_iff(kink, c, g.nearest_index(0.0), 0.25);
  CHECK(corner.status == VerdictStatus::pass);
  CHECK(corner.notes == "branch=no-support");
  double gap = 0.0;
  for (const auto& [k, v] : corner.witness) {
    if (k == "gap") gap = v;
  }
  CHECK(gap > 0.0);

  CHECK_THROWS_AS(check_local_support_iff(kink, c, 0, 0.25), InvalidArgument);
}

TEST_CASE("suite") {
  SuiteConfig cfg;
  cfg.n = 33;
  const std::vector<Verdict> a = run_suite(cfg);
  const std::vector<Verdict> b = run_suite(cfg);
  REQUIRE(a.size() == b.size());
  std::set<std::string> ids;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].check_id == b[k].check_id);
    CHECK(a[k].status == b[k].status);
    CHECK(a[k].max_violation == b[k].max_violation);
    CHECK(a[k].witness == b[k].witness);
    CHECK(a[k].status != VerdictStatus::fail);
    ids.insert(a[k].check_id);
    if (k > 0) CHECK(a[k - 1].check_id < a[k].check_id);
  }
  CHECK(ids.size() == a.size());
  CHECK(ids.count("mixture/bilinear/lambda=0.25") == 1);
  CHECK(ids.count("local_support_iff/neg_abs/alpha=0") == 1);
  CHECK_FALSE(any_conclusion_failed(a));

  cfg.falsify = true;
  const std::vector<Verdict> f = run_suite(cfg);
  CHECK_FALSE(any_conclusion_failed(f));
  std::size_t gated = 0;
  for (const Verdict& v : f) {
    if (v.check_id.rfind("subdiff_convexity", 0) == 0 || v.check_id.rfind("set_valued", 0) == 0 ||
        v.check_id.rfind("intersection_inclusion", 0) == 0 || v.check_id.rfind("domain_interval", 0) == 0) {
      CHECK(v.status == VerdictStatus::hypothesis_failed);
      ++gated;
    }
  }
  CHECK(gated == 2 + kDefaultLambdas.size() + 3 + 3);

  Verdict bad;
  bad.status = VerdictStatus::fail;
  CHECK(any_conclusion_failed({bad}));
  cfg.n = 3;
  CHECK_THROWS_AS(run_suite(cfg), InvalidArgument);
}
