#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cconv/cost.hpp"
#include "cconv/errors.hpp"

using namespace cconv;

TEST_CASE("family evaluation") {
  CHECK(evaluate_cost(CostSpec::bilinear(), 2.0, 3.0) == 6.0);
  for (double y : {-3.0, 0.0, 0.4, 7.0}) CHECK(evaluate_cost(CostSpec::reflector(), 0.0, y) == 0.0);
  CHECK(evaluate_cost(CostSpec::neg_quadratic(), 1.0, 1.0) == 0.0);
  CHECK(evaluate_cost(CostSpec::neg_quadratic(2.5), 1.0, 3.0) == -10.0);
  CHECK(evaluate_cost(CostSpec::reflector(), 0.5, 0.5) == doctest::Approx(-std::log(0.75)));

  const CostSpec poly = CostSpec::one_affine({1.0, 0.0, 0.0, 1.0}, {0.0, 2.0});
  CHECK(evaluate_cost(poly, 2.0, 2.0) == doctest::Approx((8.0 + 1.0) * 2.0 + 4.0));
  CHECK(poly.label() == "one_affine:1,0,0,1/0,2");

  const CostSpec tr = CostSpec::translation([](double t) { return -std::abs(t); }, {}, "neg_abs");
  CHECK(tr(0.25, 1.0) == -0.75);
  CHECK_FALSE(tr.dx(0.25, 1.0).has_value());
}

TEST_CASE("closed-form x-derivatives match central differences") {
  const double h = 1e-6;
  for (const CostSpec& c : {CostSpec::bilinear(), CostSpec::neg_quadratic(1.7), CostSpec::reflector(),
                            CostSpec::one_affine({0.5, -1.0, 2.0}, {1.0})}) {
    for (double x : {-0.3, 0.1, 0.35}) {
      for (double y : {-0.8, 0.0, 0.6}) {
        const double fd = (c(x + h, y) - c(x - h, y)) / (2.0 * h);
        REQUIRE(c.dx(x, y).has_value());
        CHECK(*c.dx(x, y) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("reflector hard-fails outside xy < 1") {
  CHECK_THROWS_AS(evaluate_cost(CostSpec::reflector(), 1.0, 1.0), CostDomainError);
  try {
    evaluate_cost(CostSpec::reflector(), 2.0, 0.75);
    FAIL("expected a domain error");
  } catch (const CostDomainError& e) {
    CHECK(e.x() == 2.0);
    CHECK(e.y() == 0.75);
  }
  const Grid g = make_uniform_grid(0.0, 2.0, 5);
  try {
    tabulate_cost(CostSpec::reflector(), g, g);
    FAIL("expected a domain error");
  } catch (const CostDomainError& e) {
    CHECK(e.x() * e.y() >= 1.0);
    CHECK(e.i() != CostDomainError::kNoIndex);
    CHECK(g.point(e.i()) == e.x());
    CHECK(g.point(e.j()) == e.y());
  }
}

TEST_CASE("tabulation") {
  const Grid g = make_uniform_grid(0.0, 1.0, 2);
  const CostMatrix m = tabulate_cost(CostSpec::bilinear(), g, g);
  CHECK(m.entries() == std::vector<double>{0.0, 0.0, 0.0, 1.0});

  const Grid gi = make_uniform_grid(-1.0, 1.0, 17);
  const Grid gj = make_uniform_grid(-2.0, 3.0, 23);
  const CostMatrix bil = tabulate_cost(CostSpec::bilinear(), gi, gj);
  const CostMatrix aff = tabulate_cost(CostSpec::one_affine({0.0, 1.0}, {0.0}), gi, gj);
  for (std::size_t i = 0; i < 17; ++i) {
    for (std::size_t j = 0; j < 23; ++j) {
      CHECK(aff(i, j) == bil(i, j));
      CHECK(bil(i, j) == gi.point(i) * gj.point(j));
    }
  }

  const Grid half = make_uniform_grid(0.0, 0.5, 41);
  const CostMatrix refl = tabulate_cost(CostSpec::reflector(), half, half);
  const double top = -std::log(0.75);
  for (double v : refl.entries()) {
    CHECK(v >= 0.0);
    CHECK(v <= top + 1e-15);
  }
  for (std::size_t i = 0; i + 1 < 41; ++i) {
    for (std::size_t j = 0; j < 41; ++j) CHECK(refl(i + 1, j) >= refl(i, j));
  }
  CHECK(refl(40, 40) == doctest::Approx(top));
}

TEST_CASE("negation toggles the label") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 5);
  const CostMatrix m = tabulate_cost(CostSpec::bilinear(), g, g);
  const CostMatrix n = m.negated();
  CHECK(n.label() == "-bilinear");
  CHECK(n.negated().label() == "bilinear");
  CHECK(n.negated().entries() == m.entries());
  for (std::size_t k = 0; k < m.entries().size(); ++k) CHECK(n.entries()[k] == -m.entries()[k]);
}

TEST_CASE("structure detection") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 33);
  const CostMatrix bil = tabulate_cost(CostSpec::bilinear(), g, g);
  const StructureVerdict one = check_structure(bil, StructureProperty::one_affine);
  const StructureVerdict two = check_structure(bil, StructureProperty::two_affine);
  CHECK(one.holds);
  CHECK(two.holds);
  CHECK(one.max_violation <= 1e-12);
  CHECK(two.max_violation <= 1e-12);

  const CostMatrix nq = tabulate_cost(CostSpec::neg_quadratic(), g, g);
  CHECK(check_structure(nq, StructureProperty::one_concave).holds);
  CHECK(check_structure(nq, StructureProperty::two_concave).holds);
  const StructureVerdict nq_affine = check_structure(nq, StructureProperty::one_affine);
  CHECK_FALSE(nq_affine.holds);
  CHECK(nq_affine.max_violation == doctest::Approx(2.0 * g.step() * g.step()));
  REQUIRE(nq_affine.witness.has_value());
  CHECK(nq_affine.witness->axis == 0);
  CHECK_FALSE(check_structure(nq, StructureProperty::one_convex).holds);

  const Grid half = make_uniform_grid(0.0, 0.5, 33);
  const CostMatrix refl = tabulate_cost(CostSpec::reflector(), half, half);
  CHECK(check_structure(refl, StructureProperty::one_convex).holds);
  CHECK_FALSE(check_structure(refl, StructureProperty::one_affine).holds);

  const Grid tiny = make_uniform_grid(0.0, 1.0, 2);
  CHECK_THROWS_AS(check_structure(tabulate_cost(CostSpec::bilinear(), tiny, g), StructureProperty::one_affine),
                  InvalidArgument);
  CHECK_NOTHROW(check_structure(tabulate_cost(CostSpec::bilinear(), tiny, g), StructureProperty::two_affine));
}

TEST_CASE("one-affine columns lie on their end-to-end chord") {
  const Grid gi = make_uniform_grid(-1.0, 2.0, 31);
  const Grid gj = make_uniform_grid(-1.0, 1.0, 21);
  const CostMatrix m = tabulate_cost(CostSpec::one_affine({1.0, 0.0, 0.0, 1.0}, {0.3, -0.2}), gi, gj);
  REQUIRE(check_structure(m, StructureProperty::one_affine).holds);
  for (std::size_t j = 0; j < 21; ++j) {
    for (std::size_t i = 0; i < 31; ++i) {
      const double t = double(i) / 30.0;
      const double chord = (1.0 - t) * m(0, j) + t * m(30, j);
      CHECK(std::abs(m(i, j) - chord) <= default_structure_tol(m));
    }
  }
}

TEST_CASE("structure verdicts survive refinement") {
  for (std::size_t n : {17, 33, 65}) {
    const Grid g = make_uniform_grid(-1.0, 1.0, n);
    const Grid half = make_uniform_grid(0.0, 0.5, n);
    CHECK(check_structure(tabulate_cost(CostSpec::bilinear(), g, g), StructureProperty::two_affine).holds);
    CHECK(check_structure(tabulate_cost(CostSpec::neg_quadratic(), g, g), StructureProperty::one_concave).holds);
    CHECK(check_structure(tabulate_cost(CostSpec::reflector(), half, half), StructureProperty::one_convex).holds);
  }
}

TEST_CASE("joint concavity along segments") {
  const Grid g = make_uniform_grid(-1.0, 1.0, 21);
  CHECK(check_joint_concavity(tabulate_cost(CostSpec::neg_quadratic(), g, g)).holds);
  const StructureVerdict bil = check_joint_concavity(tabulate_cost(CostSpec::bilinear(), g, g));
  CHECK_FALSE(bil.holds);
  REQUIRE(bil.witness.has_value());
  CHECK((bil.witness->axis == 2 || bil.witness->axis == 3));
  const CostMatrix affine = tabulate_function([](double x, double y) { return 0.7 * y + 0.3 * x; }, g, g, "affine");
  CHECK(check_joint_concavity(affine).holds);
}

TEST_CASE("matrix validation") {
  const Grid g = make_uniform_grid(0.0, 1.0, 2);
  CHECK_THROWS_AS(CostMatrix(g, g, {0.0, 1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(CostMatrix(g, g, {0.0, 1.0, 2.0, NAN}), InvalidArgument);
  CHECK(parse_cost_family("neg_quadratic") == CostFamily::neg_quadratic);
  CHECK_FALSE(parse_cost_family("quadratic").has_value());
  CHECK_THROWS_AS(CostSpec::neg_quadratic(0.0), InvalidArgument);
}
