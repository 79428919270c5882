#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cconv/cost.hpp"
#include "cconv/grid.hpp"
#include "cconv/jensen.hpp"
#include "cconv/subdifferential.hpp"
#include "cconv/transform.hpp"
#include "cconv/verdict.hpp"

namespace cconv::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal that round-trips to the same double; "inf" / "-inf" for
/// infinities. Negative zero prints as "0".
std::string format_number(double v);

/// Finite values become JSON numbers, infinities the strings "inf" / "-inf".
Json number(double v);

Json to_json(const Verdict& v);
Json to_json(const JensenReport& r);
Json to_json(const StructureVerdict& v);
Json to_json(const ConvexityVerdict& v);

/// Values carry their own grid; `arg_grid` is the grid the optimizers index into.
Json to_json(const TransformResult& t, const Grid& arg_grid);
void write_transform_csv(std::ostream& os, const TransformResult& t, const Grid& arg_grid);

/// Sparse triples x_index,y_index,slack for every member of every set.
void write_slack_triples_csv(std::ostream& os, const SubdifferentialMap& map);

/// Two columns x,value.
void write_function_csv(std::ostream& os, const GridFunction& f);

/// Two-column x,f(x) table; a non-numeric first line is a header. x must be
/// strictly increasing and uniform within 1e-9 relative step tolerance.
GridFunction read_function_csv(std::istream& is);

/// First row holds the y grid (its first cell is ignored), first column the x grid.
CostMatrix read_cost_csv(std::istream& is, std::string label);

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t v);

}  // namespace cconv::io
