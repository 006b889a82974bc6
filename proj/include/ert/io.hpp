#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "ert/bounds.hpp"
#include "ert/distance_oracles.hpp"
#include "ert/domain.hpp"
#include "ert/transforms.hpp"

#include <json.hpp>

namespace ert {

/// Function file:
///   domain line <n>            or   domain grid <n> <d>
///   values real|bit|field <p>        (optional; default real)
///   <one token per point in canonical order; `_` is erased>
/// Blank lines and text after `#` are ignored.
ErasedFunction parse_function(std::istream& in);
ErasedFunction read_function_file(const std::string& path);
void write_function(std::ostream& out, const ErasedFunction& f);
void write_function_file(const std::string& path, const ErasedFunction& f);

/// Bounds file: `bounds <d> <n>`, then per dimension a row of n-1 lower
/// bounds and a row of n-1 upper bounds; `inf` and `-inf` allowed.
BoundingFamily parse_bounds(std::istream& in);
BoundingFamily read_bounds_file(const std::string& path);
void write_bounds(std::ostream& out, const BoundingFamily& b);

/// Poset file: `poset <N>`, then `u v` pairs (0-based) meaning u ≼ v.
Poset parse_poset(std::istream& in);
Poset read_poset_file(const std::string& path);
void write_poset(std::ostream& out, const Poset& p);

/// Same values reinterpreted as another kind (0/1 reals as bits, integral
/// reals as field elements mod p). Throws ParseError when impossible.
ErasedFunction coerce_kind(const ErasedFunction& f, ValueKind kind,
                           std::int64_t modulus = 0);

nlohmann::json to_json(const DistanceReport& r);
DistanceReport distance_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const Verdict& v);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace ert
