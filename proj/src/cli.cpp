#include "cconv/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cconv/errors.hpp"
#include "cconv/io.hpp"
#include "cconv/jensen.hpp"
#include "cconv/propcheck.hpp"
#include "cconv/subdifferential.hpp"
#include "cconv/transform.hpp"

namespace cconv::cli {

using io::Json;

namespace {

constexpr std::string_view kCsvPrefix = "csv:";

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument("bad number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.push_back(s.substr(start, at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

std::vector<double> parse_list(std::string_view s, std::string_view what) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (std::string_view part : split(s, ',')) out.push_back(parse_number(part, what));
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return in;
}

void emit(const RunConfig& cfg, const std::string& suffix, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  const std::string path = cfg.out + suffix;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidArgument("cannot write '" + path + "'");
  file << text;
  if (!file) throw InvalidArgument("write to '" + path + "' failed");
}

OutputFormat format_or(const RunConfig& cfg, OutputFormat fallback) { return cfg.format.value_or(fallback); }

Json interval_json(const Interval& iv) { return Json::array({iv.lo, iv.hi}); }

Json grid_json(const Grid& g) {
  return Json{{"lo", g.lo()}, {"hi", g.hi()}, {"size", g.size()}, {"step", g.step()}};
}

Json config_json(const RunConfig& cfg) {
  Json c{{"command", cfg.command},
         {"interval_i", interval_json(cfg.interval_i)},
         {"interval_j", interval_json(cfg.interval_j)},
         {"n", cfg.n},
         {"m", cfg.m},
         {"cost", cfg.cost},
         {"f", cfg.f},
         {"tol", cfg.tol ? Json(*cfg.tol) : Json(nullptr)},
         {"seed", cfg.seed}};
  if (cfg.command == "suite") {
    c["falsify"] = cfg.falsify;
    c["exhaustive"] = cfg.exhaustive;
    c["max_pairs"] = cfg.max_pairs;
  } else if (cfg.command == "jensen") {
    c["form"] = cfg.form;
    c["measure"] = cfg.measure;
    c["points"] = cfg.points;
    c["y"] = cfg.y ? Json(*cfg.y) : Json(nullptr);
    c["xi"] = cfg.xi ? Json(*cfg.xi) : Json(nullptr);
    c["rule"] = cfg.rule;
  } else if (cfg.command == "gen") {
    c["generator"] = cfg.generator;
    c["amplitude"] = cfg.amplitude;
  }
  return c;
}

Json provenance(const RunConfig& cfg, Json tolerances, Json grids) {
  Json config = config_json(cfg);
  const std::string hash = io::hex64(io::fnv1a64(config.dump()));
  return Json{{"tool", "cconv"},
              {"config", std::move(config)},
              {"config_hash", hash},
              {"tolerances", std::move(tolerances)},
              {"grids", std::move(grids)}};
}

struct Problem {
  GridFunction f;
  CostMatrix cost;
};

GridFunction function_on(const RunConfig& cfg, const Grid& grid) {
  if (starts_with(cfg.f, kCsvPrefix)) {
    std::ifstream in = open_input(std::string(cfg.f.substr(kCsvPrefix.size())));
    GridFunction f = io::read_function_csv(in);
    if (!(f.grid() == grid)) throw InvalidArgument("function CSV grid does not match the cost's x grid");
    return f;
  }
  return sample_function(catalog_function(cfg.f), grid);
}

Problem resolve_problem(const RunConfig& cfg) {
  if (starts_with(cfg.cost, kCsvPrefix)) {
    std::ifstream in = open_input(std::string(cfg.cost.substr(kCsvPrefix.size())));
    CostMatrix cost = io::read_cost_csv(in, cfg.cost);
    GridFunction f = function_on(cfg, cost.grid_i());
    return {std::move(f), std::move(cost)};
  }
  const CostSpec spec = parse_cost_spec(cfg.cost);
  std::optional<GridFunction> f;
  Grid gi(cfg.interval_i, cfg.n);
  if (starts_with(cfg.f, kCsvPrefix)) {
    std::ifstream in = open_input(std::string(cfg.f.substr(kCsvPrefix.size())));
    f = io::read_function_csv(in);
    gi = f->grid();
  } else {
    f = sample_function(catalog_function(cfg.f), gi);
  }
  CostMatrix cost = tabulate_cost(spec, gi, Grid(cfg.interval_j, cfg.m));
  return {std::move(*f), std::move(cost)};
}

QuadratureRule parse_rule(std::string_view token) {
  if (token == "trapezoid") return QuadratureRule::trapezoid;
  if (token == "midpoint") return QuadratureRule::midpoint;
  throw InvalidArgument("unknown quadrature rule '" + std::string(token) + "'");
}

Interval parse_interval(const std::string& text) {
  const std::vector<double> v = parse_list(text, "interval");
  if (v.size() != 2) throw InvalidArgument("interval must be 'a,b', got '" + text + "'");
  return Interval(v[0], v[1]);
}

}  // namespace

CostSpec parse_cost_spec(std::string_view token) {
  const std::size_t colon = token.find(':');
  const std::string_view name = token.substr(0, colon);
  const std::string_view params = colon == std::string_view::npos ? std::string_view{} : token.substr(colon + 1);
  const std::optional<CostFamily> family = parse_cost_family(name);
  if (!family) throw InvalidArgument("unknown cost family '" + std::string(name) + "'");
  switch (*family) {
    case CostFamily::bilinear:
    case CostFamily::reflector:
      if (!params.empty()) throw InvalidArgument(std::string(name) + " takes no parameters");
      return *family == CostFamily::bilinear ? CostSpec::bilinear() : CostSpec::reflector();
    case CostFamily::neg_quadratic:
      return params.empty() ? CostSpec::neg_quadratic() : CostSpec::neg_quadratic(parse_number(params, "neg_quadratic scale"));
    case CostFamily::one_affine: {
      const auto parts = split(params, '/');
      if (parts.size() != 2) throw InvalidArgument("one_affine needs 'a0,a1,../b0,b1,..'");
      std::vector<double> a = parse_list(parts[0], "one_affine a(y)");
      std::vector<double> b = parse_list(parts[1], "one_affine b(y)");
      if (a.empty()) a.push_back(0.0);
      if (b.empty()) b.push_back(0.0);
      return CostSpec::one_affine(std::move(a), std::move(b));
    }
    case CostFamily::translation:
      if (params == "neg_square") {
        return CostSpec::translation([](double t) { return -t * t; }, [](double t) { return -2.0 * t; },
                                     "translation:neg_square");
      }
      if (params == "neg_abs") {
        return CostSpec::translation([](double t) { return -std::abs(t); }, {}, "translation:neg_abs");
      }
      throw InvalidArgument("translation needs 'neg_square' or 'neg_abs'");
  }
  throw InvalidArgument("unknown cost family '" + std::string(name) + "'");
}

std::function<double(double)> catalog_function(std::string_view token) {
  if (token == "parabola") return [](double x) { return 0.5 * x * x; };
  if (token == "square") return [](double x) { return x * x; };
  if (token == "neg_square") return [](double x) { return -x * x; };
  if (token == "neg_parabola") return [](double x) { return -0.5 * x * x; };
  if (token == "abs") return [](double x) { return std::abs(x); };
  if (token == "neg_abs") return [](double x) { return -std::abs(x); };
  if (token == "zero") return [](double) { return 0.0; };
  if (token == "constant") return [](double) { return 1.0; };
  if (starts_with(token, "constant:")) {
    const double k = parse_number(token.substr(9), "constant");
    return [k](double) { return k; };
  }
  if (starts_with(token, "pwl:")) {
    std::vector<double> xs, vs;
    for (std::string_view knot : split(token.substr(4), ',')) {
      const auto xv = split(knot, ':');
      if (xv.size() != 2) throw InvalidArgument("pwl knots are 'x:v', got '" + std::string(knot) + "'");
      xs.push_back(parse_number(xv[0], "pwl knot"));
      vs.push_back(parse_number(xv[1], "pwl value"));
    }
    if (xs.size() < 2) throw InvalidArgument("pwl needs at least two knots");
    for (std::size_t k = 1; k < xs.size(); ++k) {
      if (!(xs[k] > xs[k - 1])) throw InvalidArgument("pwl knots must be strictly increasing");
    }
    return [xs, vs](double x) {
      if (x < xs.front() || x > xs.back()) {
        throw InvalidArgument("x = " + io::format_number(x) + " lies outside the pwl knots");
      }
      const std::size_t k = std::min<std::size_t>(
          xs.size() - 2, static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1);
      const double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
      return (1.0 - t) * vs[k] + t * vs[k + 1];
    };
  }
  throw InvalidArgument("unknown function '" + std::string(token) + "'");
}

DiscreteMeasure parse_measure(std::string_view token) {
  std::vector<Atom> atoms;
  if (starts_with(token, kCsvPrefix)) {
    std::ifstream in = open_input(std::string(token.substr(kCsvPrefix.size())));
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto cells = split(line, ',');
      if (cells.size() != 2) throw ParseError("expected two columns x,p", number);
      try {
        atoms.push_back({parse_number(cells[0], "atom"), parse_number(cells[1], "weight")});
      } catch (const InvalidArgument& e) {
        if (number == 1 && atoms.empty()) continue;
        throw ParseError(e.what(), number);
      }
    }
  } else {
    for (std::string_view part : split(token, ',')) {
      const auto xp = split(part, ':');
      if (xp.size() != 2) throw InvalidArgument("atoms are 'x:p', got '" + std::string(part) + "'");
      atoms.push_back({parse_number(xp[0], "atom"), parse_number(xp[1], "weight")});
    }
  }
  return DiscreteMeasure(std::move(atoms));
}

int run_transform(const RunConfig& cfg, std::ostream& out) {
  const Problem p = resolve_problem(cfg);
  const TransformResult fc = c_transform(p.f, p.cost);
  const TransformResult fcc = dual_c_transform(fc.values, p.cost);
  const ConvexityVerdict verdict = is_c_convex(p.f, p.cost, cfg.tol);
  const Grid& gi = p.cost.grid_i();
  const Grid& gj = p.cost.grid_j();

  if (format_or(cfg, OutputFormat::csv) == OutputFormat::csv) {
    if (cfg.out.empty()) throw InvalidArgument("csv output of transform writes several files and needs --out");
    std::ostringstream a, b, v;
    io::write_transform_csv(a, fc, gi);
    io::write_transform_csv(b, fcc, gj);
    v << "holds,deviation,tol\n"
      << (verdict.holds ? "true" : "false") << ',' << io::format_number(verdict.deviation) << ','
      << io::format_number(verdict.tol) << '\n';
    emit(cfg, ".fc.csv", a.str(), out);
    emit(cfg, ".fcc.csv", b.str(), out);
    emit(cfg, ".verdict.csv", v.str(), out);
    return 0;
  }
  Json doc{{"provenance", provenance(cfg, Json{{"c_convex", io::number(verdict.tol)}},
                                     Json{{"i", grid_json(gi)}, {"j", grid_json(gj)}})},
           {"cost", p.cost.label()},
           {"fc", io::to_json(fc, gi)},
           {"fcc", io::to_json(fcc, gj)},
           {"c_convex", io::to_json(verdict)}};
  emit(cfg, "", doc.dump(2) + "\n", out);
  return 0;
}

int run_subdiff(const RunConfig& cfg, std::ostream& out) {
  const Problem p = resolve_problem(cfg);
  const double tol = cfg.tol.value_or(default_membership_tol(p.f, p.cost));
  const SubdifferentialMap map = subdifferential_map(p.f, p.cost, tol);

  if (format_or(cfg, OutputFormat::csv) == OutputFormat::csv) {
    std::ostringstream os;
    io::write_slack_triples_csv(os, map);
    emit(cfg, "", os.str(), out);
    return 0;
  }
  const Grid& gj = p.cost.grid_j();
  Json sets = Json::array();
  for (const SubdifferentialSet& s : map.sets) {
    Json entry{{"x_index", s.x0_index}, {"x", p.cost.grid_i().point(s.x0_index)}, {"y_indices", s.y_indices}};
    Json slacks = Json::array();
    for (double v : s.slacks) slacks.push_back(io::number(v));
    entry["slacks"] = std::move(slacks);
    if (!s.empty()) {
      const auto [lo, hi] = lateral_c_derivatives(s, gj);
      entry["lateral"] = Json::array({lo, hi});
    }
    sets.push_back(std::move(entry));
  }
  Json doc{{"provenance", provenance(cfg, Json{{"membership", tol}},
                                     Json{{"i", grid_json(p.cost.grid_i())}, {"j", grid_json(gj)}})},
           {"cost", p.cost.label()},
           {"sets", std::move(sets)}};
  emit(cfg, "", doc.dump(2) + "\n", out);
  return 0;
}

int run_jensen(const RunConfig& cfg, std::ostream& out) {
  if (starts_with(cfg.cost, kCsvPrefix)) throw InvalidArgument("jensen needs an analytic cost family");
  const CostSpec spec = parse_cost_spec(cfg.cost);
  const Grid gj(cfg.interval_j, cfg.m);
  std::optional<JensenFunction> f;
  if (starts_with(cfg.f, kCsvPrefix)) {
    std::ifstream in = open_input(std::string(cfg.f.substr(kCsvPrefix.size())));
    f = JensenFunction::tabulated(io::read_function_csv(in));
  } else {
    f = JensenFunction::analytic(catalog_function(cfg.f), Grid(cfg.interval_i, cfg.n));
  }
  const JensenSetup setup{*f, spec, gj};
  const double tol = cfg.tol.value_or(1e-9);

  JensenReport report;
  if (cfg.form == "discrete") {
    if (cfg.measure.empty()) throw InvalidArgument("discrete form needs --measure");
    report = discrete_jensen_gap(setup, parse_measure(cfg.measure), cfg.y, tol);
  } else if (cfg.form == "weighted") {
    if (cfg.measure.empty()) throw InvalidArgument("weighted form needs --measure");
    report = weighted_integral_bound(setup, parse_measure(cfg.measure), cfg.y, tol);
  } else if (cfg.form == "midpoint") {
    if (cfg.points.size() != 2) throw InvalidArgument("midpoint form needs --points a,b");
    report = midpoint_bound(setup, cfg.points[0], cfg.points[1], cfg.y, tol);
  } else if (cfg.form == "integral") {
    report = integral_jensen_bound(setup, cfg.xi, cfg.y, parse_rule(cfg.rule), tol);
  } else {
    throw InvalidArgument("unknown jensen form '" + cfg.form + "'");
  }

  if (format_or(cfg, OutputFormat::json) == OutputFormat::csv) {
    std::ostringstream os;
    os << "lhs,rhs,slack,y_witness,holds,hypothesis_verified\n"
       << io::format_number(report.lhs) << ',' << io::format_number(report.rhs) << ','
       << io::format_number(report.slack) << ',' << io::format_number(report.y_witness) << ','
       << (report.holds ? "true" : "false") << ',' << (report.hypothesis_verified ? "true" : "false") << '\n';
    emit(cfg, "", os.str(), out);
    return 0;
  }
  Json doc{{"provenance", provenance(cfg, Json{{"requested", tol}, {"effective", io::number(report.tol)}},
                                     Json{{"i", grid_json(setup.f.grid())}, {"j", grid_json(gj)}})},
           {"form", cfg.form},
           {"report", io::to_json(report)}};
  emit(cfg, "", doc.dump(2) + "\n", out);
  return 0;
}

int run_suite(const RunConfig& cfg, std::ostream& out, std::ostream& summary) {
  if (format_or(cfg, OutputFormat::json) != OutputFormat::json) throw InvalidArgument("suite emits json only");
  SuiteConfig sc;
  sc.seed = cfg.seed;
  sc.n = cfg.n;
  sc.max_pairs = cfg.max_pairs;
  sc.exhaustive = cfg.exhaustive;
  sc.falsify = cfg.falsify;
  sc.tol = cfg.tol;
  const std::vector<Verdict> verdicts = cconv::run_suite(sc);

  Json list = Json::array();
  for (const Verdict& v : verdicts) list.push_back(io::to_json(v));
  Json doc{{"provenance", provenance(cfg, Json{{"membership", cfg.tol ? Json(*cfg.tol) : Json("per-check default")}},
                                     Json{{"n", cfg.n}})},
           {"verdicts", std::move(list)}};
  emit(cfg, "", doc.dump(2) + "\n", out);

  for (const Verdict& v : verdicts) {
    summary << to_string(v.status) << ' ' << v.check_id << " max_violation=" << io::format_number(v.max_violation)
            << " tol=" << io::format_number(v.tol) << '\n';
  }
  return any_conclusion_failed(verdicts) ? 1 : 0;
}

int run_gen(const RunConfig& cfg, std::ostream& out) {
  if (starts_with(cfg.cost, kCsvPrefix)) throw InvalidArgument("gen needs an analytic cost family");
  const std::optional<Generator> generator = parse_generator(cfg.generator);
  if (!generator) throw InvalidArgument("unknown generator '" + cfg.generator + "'");
  InstanceConfig ic;
  ic.seed = cfg.seed;
  ic.n = cfg.n;
  ic.m = cfg.m;
  ic.interval_i = cfg.interval_i;
  ic.interval_j = cfg.interval_j;
  ic.cost = parse_cost_spec(cfg.cost);
  ic.generator = *generator;
  ic.amplitude = cfg.amplitude;
  const Instance inst = generate_instance(ic);

  if (format_or(cfg, OutputFormat::csv) == OutputFormat::csv) {
    std::ostringstream os;
    io::write_function_csv(os, inst.f);
    emit(cfg, "", os.str(), out);
    return 0;
  }
  Json xs = Json::array(), values = Json::array();
  for (std::size_t k = 0; k < inst.f.size(); ++k) {
    xs.push_back(inst.f.grid().point(k));
    values.push_back(io::number(inst.f[k]));
  }
  Json doc{{"provenance", provenance(cfg, Json::object(),
                                     Json{{"i", grid_json(inst.cost.grid_i())}, {"j", grid_json(inst.cost.grid_j())}})},
           {"x", std::move(xs)},
           {"value", std::move(values)}};
  emit(cfg, "", doc.dump(2) + "\n", out);
  return 0;
}

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, std::string& interval_i, std::string& interval_j,
                std::string& format, std::string& tol) {
  sub->add_option("--interval-i", interval_i, "x interval as a,b");
  sub->add_option("--interval-j", interval_j, "y interval as a,b");
  sub->add_option("--n", cfg.n, "x grid size");
  sub->add_option("--m", cfg.m, "y grid size");
  sub->add_option("--cost", cfg.cost, "cost family[:params] or csv:PATH");
  sub->add_option("--f", cfg.f, "built-in function name or csv:PATH");
  sub->add_option("--tol", tol, "tolerance override");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--out", cfg.out, "output path (stdout when omitted)");
  sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"c-convexity toolkit on 1-D grids", "cconv"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string interval_i, interval_j, format, tol, points;

  CLI::App* transform = app.add_subcommand("transform", "c-transform, double c-transform and c-convexity verdict");
  CLI::App* subdiff = app.add_subcommand("subdiff", "c-subdifferential map as sparse slack triples");
  CLI::App* jensen = app.add_subcommand("jensen", "Jensen-type gap bounds");
  CLI::App* suite = app.add_subcommand("suite", "proposition suite over seeded instances");
  CLI::App* gen = app.add_subcommand("gen", "seeded random instance");
  for (CLI::App* sub : {transform, subdiff, jensen, suite, gen}) add_common(sub, cfg, interval_i, interval_j, format, tol);

  jensen->add_option("--form", cfg.form, "discrete, midpoint, integral or weighted")
      ->check(CLI::IsMember({"discrete", "midpoint", "integral", "weighted"}));
  jensen->add_option("--measure", cfg.measure, "atoms x:p,... or csv:PATH");
  jensen->add_option("--points", points, "midpoint endpoints a,b");
  jensen->add_option("--y", cfg.y, "fixed witness y");
  jensen->add_option("--xi", cfg.xi, "anchor point of the integral form");
  jensen->add_option("--rule", cfg.rule, "trapezoid or midpoint")->check(CLI::IsMember({"trapezoid", "midpoint"}));
  suite->add_flag("--falsify", cfg.falsify, "swap in functions that violate the hypotheses");
  suite->add_flag("--exhaustive", cfg.exhaustive, "enumerate every pair");
  suite->add_option("--max-pairs", cfg.max_pairs, "sampled pairs per check");
  gen->add_option("--generator", cfg.generator, "random_piecewise_linear, random_smooth_fourier or cconvexified_random");
  gen->add_option("--amplitude", cfg.amplitude, "amplitude of the random function");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (!interval_i.empty()) cfg.interval_i = parse_interval(interval_i);
    if (!interval_j.empty()) cfg.interval_j = parse_interval(interval_j);
    if (!format.empty()) cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (!tol.empty()) {
      cfg.tol = parse_number(tol, "--tol");
      if (!(*cfg.tol > 0.0)) throw InvalidArgument("--tol must be positive");
    }
    if (!points.empty()) cfg.points = parse_list(points, "--points");
    if (cfg.n < 2 || cfg.m < 2) throw InvalidArgument("grid sizes must be at least 2");

    if (transform->parsed()) {
      cfg.command = "transform";
      return run_transform(cfg, out);
    }
    if (subdiff->parsed()) {
      cfg.command = "subdiff";
      return run_subdiff(cfg, out);
    }
    if (jensen->parsed()) {
      cfg.command = "jensen";
      return run_jensen(cfg, out);
    }
    if (suite->parsed()) {
      cfg.command = "suite";
      return run_suite(cfg, out, cfg.out.empty() ? err : out);
    }
    cfg.command = "gen";
    return run_gen(cfg, out);
  } catch (const CostDomainError& e) {
    err << "error: cost domain violation at x = " << io::format_number(e.x()) << ", y = " << io::format_number(e.y())
        << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace cconv::cli
