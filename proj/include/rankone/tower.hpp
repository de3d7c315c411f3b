#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "rankone/interval_set.hpp"
#include "rankone/json_io.hpp"
#include "rankone/scheme.hpp"

namespace rankone {

inline constexpr int kDefaultStageCap = 40;
inline constexpr std::int64_t kMaxHeight = std::int64_t{1} << 62;

/// Fully materialized stage-n tower: level intervals bottom (index 0) to top,
/// plus the unused pool.
struct Stage {
  int n = 1;
  Scalar width;
  std::int64_t height = 1;
  std::vector<Interval> levels;
  IntervalSet pool;
};

/// Literal cut-and-stack: cuts every level of stage n into equal sublevels,
/// stacks the subcolumns left to right and carves each spacer from the
/// leftmost remaining pool. Throws ResourceError when the height would exceed
/// `max_levels`.
Stage build_stage(const SchemeSpec& spec, int n, std::int64_t max_levels = std::int64_t{1} << 22);

/// {"n":..,"w":"p/q","h":..,"levels":[[..],..],"pool":[..]}
Json stage_to_json(const Stage& stage);

/// Symbolic description of the towers of one scheme. Nothing proportional to
/// the height is stored; level positions are recomputed by walking the
/// stage-to-stage copy structure. Stages are built on demand, appended once
/// and never modified, so concurrent readers are safe.
class Tower {
 public:
  explicit Tower(SchemeSpec spec, int stage_cap = kDefaultStageCap);

  Tower(const Tower&) = delete;
  Tower& operator=(const Tower&) = delete;

  const SchemeSpec& spec() const { return spec_; }
  /// Deepest stage that may be built: the requested cap, lowered so every
  /// height fits below kMaxHeight.
  int stage_cap() const { return cap_; }

  const Scalar& width(int n) const { return info(n).width; }
  std::int64_t height(int n) const { return info(n).height; }
  /// The pool of stage n is [pool_left(n), 1).
  const Scalar& pool_left(int n) const { return info(n).pool_left; }
  Scalar pool_measure(int n) const { return 1 - info(n).pool_left; }

  /// Left endpoint of level `level` of stage n.
  Scalar level_left(int n, std::int64_t level) const;
  Interval level_interval(int n, std::int64_t level) const;

  /// Where level `level` of stage n (n >= 2) came from in stage n-1.
  struct Origin {
    bool spacer = false;
    int copy = 0;                ///< subcolumn the level sits in, or follows (spacer)
    std::int64_t parent_level = 0;  ///< level in stage n-1 (copies only)
    std::int64_t spacer_ordinal = 0;  ///< carve order within the stage (spacers only)
  };
  Origin origin(int n, std::int64_t level) const;

  /// Level index at stage n of the copy-j image of stage-(n-1) level t.
  std::int64_t copy_level(int n, int copy, std::int64_t parent_level) const;
  /// Stage-n level index and left end of the spacer carved `ordinal`-th.
  std::int64_t spacer_level(int n, std::int64_t ordinal) const;
  Scalar spacer_left(int n, std::int64_t ordinal) const;
  std::int64_t spacer_total(int n) const;  ///< spacers added to build stage n
  int cuts_into(int n) const;              ///< cuts used to build stage n

  struct Location {
    std::int64_t level;  ///< -1 when x is in the pool
    Scalar offset;       ///< x minus the level's left end (unused for the pool)
  };
  /// Locates x ∈ [0,1) in stage n.
  Location locate(const Scalar& x, int n) const;

  /// Builds stages up to n. Throws ResourceError past the cap or kMaxHeight.
  void ensure(int n) const;

 private:
  struct StageInfo {
    Scalar width;
    std::int64_t height = 1;
    Scalar pool_left;
    int cuts = 0;                             // used to build this stage
    std::vector<std::int64_t> copy_start;     // first level of each copy
    std::vector<std::int64_t> spacer_before;  // spacers carved before copy j's gap
  };

  const StageInfo& info(int n) const;

  SchemeSpec spec_;
  int cap_;
  mutable std::vector<std::unique_ptr<StageInfo>> stages_;  // index n, fixed size cap+1
  mutable std::atomic<int> built_{0};
  mutable std::mutex build_mutex_;
};

}  // namespace rankone
