#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cconv/cli.hpp"
#include "cconv/errors.hpp"
#include "cconv/io.hpp"

using namespace cconv;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cconv");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "cconv_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cost and function tokens") {
  CHECK(cli::parse_cost_spec("bilinear").label() == "bilinear");
  CHECK(cli::parse_cost_spec("neg_quadratic:2")(0.0, 1.0) == -2.0);
  CHECK(cli::parse_cost_spec("one_affine:0,1/0")(2.0, 3.0) == 6.0);
  CHECK(cli::parse_cost_spec("translation:neg_abs")(0.25, 1.0) == -0.75);
  CHECK_THROWS_AS(cli::parse_cost_spec("quadratic"), InvalidArgument);

  CHECK(cli::catalog_function("parabola")(2.0) == 2.0);
  CHECK(cli::catalog_function("constant:1.5")(7.0) == 1.5);
  const auto pwl = cli::catalog_function("pwl:0:0,1:2,2:0");
  CHECK(pwl(0.5) == 1.0);
  CHECK(pwl(1.5) == 1.0);
  CHECK_THROWS(cli::catalog_function("cubic"));

  const DiscreteMeasure mu = cli::parse_measure("0:0.25,1:0.75");
  CHECK(mu.atoms().size() == 2);
  CHECK(barycenter(mu) == 0.75);
  CHECK_THROWS_AS(cli::parse_measure("0:0.5,1:0.25"), InvalidArgument);
}

TEST_CASE("transform of the parabola is y^2/2") {
  const Run r = run({"transform", "--f", "parabola", "--n", "513", "--m", "513", "--format", "json"});
  REQUIRE(r.code == 0);
  const io::Json doc = io::Json::parse(r.out);
  CHECK(doc["cost"] == "bilinear");
  CHECK(doc["c_convex"]["holds"] == true);
  const auto& pts = doc["fc"]["point"];
  const auto& vals = doc["fc"]["value"];
  double err = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double y = pts[j].get<double>();
    err = std::max(err, std::abs(vals[j].get<double>() - 0.5 * y * y));
  }
  CHECK(err <= 1e-5);
  CHECK(doc["provenance"]["config"]["n"] == 513);
  CHECK(doc["provenance"].contains("config_hash"));
}

TEST_CASE("transform CSV files") {
  const std::filesystem::path base = scratch("zero");
  const Run r = run({"transform", "--f", "zero", "--n", "5", "--m", "5", "--out", base.string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(base.string() + ".fc.csv") == "point,value,argmax_point\n-1,1,-1\n-0.5,0.5,-1\n0,0,-1\n0.5,0.5,1\n1,1,1\n");
  CHECK(slurp(base.string() + ".verdict.csv").rfind("holds,deviation,tol\ntrue,", 0) == 0);

  const Run no_out = run({"transform", "--f", "zero"});
  CHECK(no_out.code == 2);
  CHECK(no_out.err.find("--out") != std::string::npos);
}

TEST_CASE("reflector outside its domain names the offending pair") {
  const Run r = run({"transform", "--cost", "reflector", "--interval-i", "0,2", "--interval-j", "0,2", "--n", "5",
                     "--m", "5", "--format", "json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("cost domain violation at x = ") != std::string::npos);
}

TEST_CASE("subdifferential output") {
  const Run csv = run({"subdiff", "--f", "abs", "--n", "5", "--m", "5"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("x_index,y_index,slack\n", 0) == 0);
  CHECK(csv.out.find("\n2,0,") != std::string::npos);
  CHECK(csv.out.find("\n2,4,") != std::string::npos);

  const Run json = run({"subdiff", "--f", "abs", "--n", "5", "--m", "5", "--format", "json"});
  REQUIRE(json.code == 0);
  CHECK(io::Json::parse(json.out).contains("provenance"));
}

TEST_CASE("jensen forms") {
  const Run d = run({"jensen", "--interval-i", "0,1", "--interval-j", "-2,3", "--n", "1001", "--m", "501",
                     "--f", "square", "--measure", "0:0.5,1:0.5", "--y", "1"});
  REQUIRE(d.code == 0);
  const io::Json doc = io::Json::parse(d.out);
  CHECK(doc["form"] == "discrete");
  CHECK(doc["report"]["lhs"] == 0.25);
  CHECK(doc["report"]["rhs"] == 0.0);
  CHECK(doc["report"]["holds"] == true);

  const Run m = run({"jensen", "--form", "midpoint", "--points", "0,1", "--interval-i", "0,1", "--interval-j",
                     "-2,3", "--f", "square", "--y", "1", "--format", "csv"});
  REQUIRE(m.code == 0);
  CHECK(m.out == "lhs,rhs,slack,y_witness,holds,hypothesis_verified\n0.25,0,0.25,1,true,true\n");

  const Run i = run({"jensen", "--form", "integral", "--interval-i", "0,1", "--interval-j", "-2,3", "--n", "1001",
                     "--f", "square", "--xi", "0.5", "--y", "1", "--format", "json"});
  REQUIRE(i.code == 0);
  CHECK(std::abs(io::Json::parse(i.out)["report"]["lhs"].get<double>() - 1.0 / 12.0) <= 1e-6);

  const Run none = run({"jensen", "--f", "neg_square", "--measure", "-0.5:0.5,0.5:0.5"});
  CHECK(none.code == 2);
  CHECK(none.err.find("no admissible witness") != std::string::npos);

  CHECK(run({"jensen", "--form", "weighted"}).code == 2);
  CHECK(run({"jensen", "--form", "sideways", "--measure", "0:1"}).code != 0);
}

TEST_CASE("gen") {
  const Run a = run({"gen", "--n", "33", "--m", "33", "--seed", "4"});
  const Run b = run({"gen", "--n", "33", "--m", "33", "--seed", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("x,value\n", 0) == 0);
  const Run flat = run({"gen", "--n", "33", "--m", "33", "--amplitude", "0", "--format", "json"});
  REQUIRE(flat.code == 0);
  for (const auto& v : io::Json::parse(flat.out)["value"]) CHECK(v.get<double>() == 0.0);
  CHECK(run({"gen", "--generator", "gaussian"}).code == 2);
}

TEST_CASE("suite") {
  const Run a = run({"suite", "--n", "33"});
  const Run b = run({"suite", "--n", "33"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.err.find("pass cost_self_subdiff/bilinear max_violation=0 tol=0") != std::string::npos);
  const io::Json doc = io::Json::parse(a.out);
  CHECK(doc["verdicts"].size() > 30);

  const Run falsified = run({"suite", "--n", "33", "--falsify"});
  CHECK(falsified.code == 0);
  CHECK(falsified.err.find("hypothesis_failed subdiff_convexity/bilinear") != std::string::npos);

  const std::filesystem::path path = scratch("suite.json");
  const Run to_file = run({"suite", "--n", "33", "--out", path.string()});
  CHECK(to_file.code == 0);
  CHECK(slurp(path) == a.out);
  CHECK(to_file.out.find("pass mixture/bilinear/lambda=0.5") != std::string::npos);

  CHECK(run({"suite", "--format", "csv"}).code == 2);
  CHECK(run({"suite", "--tol", "-1"}).code == 2);
}

TEST_CASE("argument errors") {
  CHECK(run({}).code != 0);
  CHECK(run({"transform", "--n", "1"}).code == 2);
  CHECK(run({"transform", "--interval-i", "1"}).code == 2);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("transform") != std::string::npos);
}
