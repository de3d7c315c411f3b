#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankone/rational.hpp"

namespace rankone {

/// One cut-and-stack step: cut the column into `cuts` equal subcolumns, stack
/// them left to right, and put spacers[i] new levels on top of subcolumn i
/// before subcolumn i+1 goes on.
struct StageRule {
  int cuts = 2;
  std::vector<std::int64_t> spacers{0, 0};

  std::int64_t spacer_count() const;
  bool operator==(const StageRule&) const = default;
};

/// A rank-one transformation: explicit rules for stages 1..p, then `tail`
/// forever.
struct SchemeSpec {
  std::vector<StageRule> prefix;
  StageRule tail;
  std::optional<std::string> name;

  /// Rule used to build stage n+1 from stage n (n >= 1).
  const StageRule& rule_for(int n) const;

  bool operator==(const SchemeSpec&) const = default;
};

/// Same stage rules, ignoring the preset name.
bool same_rules(const SchemeSpec& a, const SchemeSpec& b);

void validate(const StageRule& rule);
void validate(const SchemeSpec& spec);

SchemeSpec chacon3();
SchemeSpec staircase4();
std::optional<SchemeSpec> preset(std::string_view name);

/// Compiles a block rule right-hand side such as "B B 1 B". Integers between
/// two B tokens go to the spacer slot of the preceding B; trailing integers go
/// to the last one.
SchemeSpec compile_block_rule(std::string_view text);

/// Parses the scheme file format: a preset name, or `prefix:`/`tail:` lines,
/// or a `block:` line. '#' starts a comment.
SchemeSpec parse_scheme(std::string_view text);
std::string serialize_scheme(const SchemeSpec& spec);

/// Resolves a CLI `--scheme` argument: a preset name or a path to a scheme file.
SchemeSpec load_scheme(const std::string& preset_or_path);

struct Normalization {
  Scalar base_width;    ///< w₁
  Scalar spacer_mass;   ///< total mass of all spacer levels ever added
};

/// Solves h₁w₁ + Σ σₙ = 1 in closed form (finite prefix plus geometric tail).
Normalization normalize(const SchemeSpec& spec);

}  // namespace rankone
