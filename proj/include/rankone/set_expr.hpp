#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rankone/rational.hpp"

namespace rankone {

/// Expression naming a subset of [0,1) in terms of a scheme's towers.
/// Evaluation needs a tower and lives in the engine.
struct SetExpr {
  enum class Kind { Interval, Levels, Base, Pool, Union, Intersect, Complement, Difference };

  Kind kind = Kind::Interval;
  Scalar lo, hi;                      // Interval
  int stage = 0;                      // Levels, Base, Pool
  std::vector<std::int64_t> indices;  // Levels, sorted and unique
  std::vector<SetExpr> children;      // combinators

  bool operator==(const SetExpr&) const = default;
};

/// Grammar: interval(a,b) | levels(n, i..j) | levels(n, [i,j,...]) | base(n) |
/// pool(n) | union(e,e) | intersect(e,e) | complement(e) | difference(e,e).
/// Ranges i..j are inclusive.
SetExpr parse_set_expr(std::string_view text);

/// Canonical text form; parse_set_expr(to_string(e)) == e.
std::string to_string(const SetExpr& e);

}  // namespace rankone
