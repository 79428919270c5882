#include "cconv/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <vector>

#include "cconv/errors.hpp"

namespace cconv::io {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json number(double v) {
  if (std::isinf(v)) return format_number(v);
  return v == 0.0 ? 0.0 : v;
}

Json to_json(const Verdict& v) {
  Json witness = Json::object();
  for (const auto& [key, value] : v.witness) witness[key] = number(value);
  return Json{{"check_id", v.check_id},
              {"status", std::string(to_string(v.status))},
              {"holds", v.holds},
              {"max_violation", number(v.max_violation)},
              {"tol", number(v.tol)},
              {"witness", witness},
              {"notes", v.notes}};
}

Json to_json(const JensenReport& r) {
  return Json{{"lhs", number(r.lhs)},
              {"rhs", number(r.rhs)},
              {"slack", number(r.slack)},
              {"y_witness", number(r.y_witness)},
              {"holds", r.holds},
              {"hypothesis_verified", r.hypothesis_verified},
              {"membership_slack", number(r.membership_slack)},
              {"tol", number(r.tol)},
              {"interpolated", r.interpolated},
              {"warnings", r.warnings}};
}

Json to_json(const StructureVerdict& v) {
  Json out{{"property", v.property},
           {"holds", v.holds},
           {"max_violation", number(v.max_violation)},
           {"tol", number(v.tol)}};
  if (v.witness) out["witness"] = Json{{"i", v.witness->i}, {"j", v.witness->j}, {"axis", v.witness->axis}};
  return out;
}

Json to_json(const ConvexityVerdict& v) {
  return Json{{"holds", v.holds}, {"deviation", number(v.deviation)}, {"tol", number(v.tol)}};
}

Json to_json(const TransformResult& t, const Grid& arg_grid) {
  Json points = Json::array(), values = Json::array(), args = Json::array();
  const Grid& g = t.values.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    points.push_back(g.point(k));
    values.push_back(number(t.values[k]));
    args.push_back(arg_grid.point(t.argmax[k]));
  }
  return Json{{"point", points}, {"value", values}, {"argmax_point", args}};
}

void write_transform_csv(std::ostream& os, const TransformResult& t, const Grid& arg_grid) {
  const Grid& g = t.values.grid();
  os << "point,value,argmax_point\n";
  for (std::size_t k = 0; k < g.size(); ++k) {
    os << format_number(g.point(k)) << ',' << format_number(t.values[k]) << ','
       << format_number(arg_grid.point(t.argmax[k])) << '\n';
  }
}

void write_slack_triples_csv(std::ostream& os, const SubdifferentialMap& map) {
  os << "x_index,y_index,slack\n";
  for (const SubdifferentialSet& s : map.sets) {
    for (std::size_t k = 0; k < s.y_indices.size(); ++k) {
      os << s.x0_index << ',' << s.y_indices[k] << ',' << format_number(s.slacks[k]) << '\n';
    }
  }
}

void write_function_csv(std::ostream& os, const GridFunction& f) {
  os << "x,value\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    os << format_number(f.grid().point(k)) << ',' << format_number(f[k]) << '\n';
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  if (s == "inf" || s == "+inf") return kPlusInf;
  if (s == "-inf") return -kPlusInf;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double require_double(std::string_view s, std::size_t line, const char* what) {
  const std::optional<double> v = parse_double(s);
  if (!v || std::isnan(*v)) throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line);
  return *v;
}

double require_finite(std::string_view s, std::size_t line, const char* what) {
  const double v = require_double(s, line, what);
  if (!std::isfinite(v)) throw ParseError(std::string(what) + " must be finite", line);
  return v;
}

Grid uniform_axis(const std::vector<double>& xs, const std::vector<std::size_t>& lines, const char* what) {
  if (xs.size() < 2) throw ParseError(std::string("need at least two ") + what + " values");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double d = xs[k] - xs[k - 1];
    if (!(d > 0.0)) throw ParseError(std::string(what) + " values must be strictly increasing", lines[k]);
    if (std::abs(d - h) > 1e-9 * std::abs(h)) throw ParseError(std::string(what) + " grid is not uniform", lines[k]);
  }
  return Grid(Interval(xs.front(), xs.back()), xs.size());
}

}  // namespace

GridFunction read_function_csv(std::istream& is) {
  std::vector<double> xs, values;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t number_of_line = 0;
  while (std::getline(is, line)) {
    ++number_of_line;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (xs.empty() && values.empty() && number_of_line == 1 && !parse_double(cells.front())) continue;
    if (cells.size() != 2) throw ParseError("expected two columns", number_of_line);
    xs.push_back(require_finite(cells[0], number_of_line, "x"));
    const double v = require_double(cells[1], number_of_line, "value");
    if (v == -kPlusInf) throw ParseError("value -inf is not allowed", number_of_line);
    values.push_back(v);
    lines.push_back(number_of_line);
  }
  const Grid grid = uniform_axis(xs, lines, "x");
  try {
    return GridFunction(grid, std::move(values));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

CostMatrix read_cost_csv(std::istream& is, std::string label) {
  std::vector<double> ys, xs, entries;
  std::vector<std::size_t> y_lines, x_lines;
  std::string line;
  std::size_t number_of_line = 0;
  bool header = true;
  while (std::getline(is, line)) {
    ++number_of_line;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (header) {
      for (std::size_t k = 1; k < cells.size(); ++k) {
        ys.push_back(require_finite(cells[k], number_of_line, "y"));
        y_lines.push_back(number_of_line);
      }
      header = false;
      continue;
    }
    if (cells.size() != ys.size() + 1) {
      throw ParseError("expected " + std::to_string(ys.size() + 1) + " columns", number_of_line);
    }
    xs.push_back(require_finite(cells[0], number_of_line, "x"));
    x_lines.push_back(number_of_line);
    for (std::size_t k = 1; k < cells.size(); ++k) entries.push_back(require_finite(cells[k], number_of_line, "cost"));
  }
  const Grid gj = uniform_axis(ys, y_lines, "y");
  const Grid gi = uniform_axis(xs, x_lines, "x");
  return CostMatrix(gi, gj, std::move(entries), std::move(label));
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

}  // namespace cconv::io
