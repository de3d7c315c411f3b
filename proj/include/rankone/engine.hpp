#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "rankone/certified.hpp"
#include "rankone/interval_set.hpp"
#include "rankone/set_expr.hpp"
#include "rankone/tower.hpp"

namespace rankone {

/// 1/1000000.
Scalar default_epsilon();

/// Part of a set sitting inside one level of a stage (offsets relative to the
/// level's left end) or inside that stage's pool (absolute coordinates).
struct Piece {
  int stage = 1;
  std::int64_t level = -1;  ///< -1 means the pool
  Scalar lo, hi;

  bool in_pool() const { return level < 0; }
  Scalar length() const { return hi - lo; }
};

/// Image of a set under Tᵏ known only up to the part whose orbit leaves every
/// examined stage.
struct PartialImage {
  IntervalSet resolved;           ///< ⊆ Tᵏ(A)
  Scalar unresolved_mass;         ///< = measure(source_unresolved)
  IntervalSet source_unresolved;  ///< part of A whose image is still undetermined
  int stage_reached = 1;
};

/// A Rohlin tower taken from one stage: floors[j] = TʲB, error = the rest.
struct RohlinTower {
  std::int64_t height = 1;
  int stage = 1;
  IntervalSet base;
  IntervalSet error;
  std::vector<IntervalSet> floors;
  std::vector<std::int64_t> base_levels;  ///< stage levels making up the base
};

/// Exact orbit and image computations for one rank-one scheme.
class Engine {
 public:
  explicit Engine(SchemeSpec spec, int stage_cap = kDefaultStageCap);

  const Tower& tower() const { return *tower_; }
  const SchemeSpec& spec() const { return tower_->spec(); }
  int stage_cap() const { return tower_->stage_cap(); }

  std::vector<Piece> decompose(const IntervalSet& a, int stage) const;
  /// Splits a stage-n piece into its stage-(n+1) pieces.
  void refine(const Piece& p, std::vector<Piece>& out) const;
  Interval absolute(const Piece& p) const;

  /// Tᵏ(A) (k < 0: preimage) refined stage by stage until the undetermined
  /// mass is at most eps. Throws ResourceError (with the achieved mass) when
  /// the stage cap comes first.
  PartialImage forward_image(const IntervalSet& a, std::int64_t k, const Scalar& eps) const;

  /// Same walk, but refined through exactly `max_stage` (or until nothing is
  /// pending) with no tolerance target.
  PartialImage image_to_stage(const IntervalSet& a, std::int64_t k, int max_stage) const;

  /// Enclosure of μ(TᵏA ∩ B) with width at most eps.
  CertifiedValue correlation(const IntervalSet& a, const IntervalSet& b, std::int64_t k,
                             const Scalar& eps) const;

  /// μ(TᵏA ∩ B) exactly, when both sets are eventually unions of whole levels
  /// (plus all or none of the pool) and the scheme's tail makes the
  /// per-stage gain geometric. nullopt when no such stage is found.
  std::optional<Scalar> exact_correlation(const IntervalSet& a, const IntervalSet& b, std::int64_t k) const;

  /// A is a union of whole stage-n levels plus all or none of the stage-n pool.
  bool aligned_at(const IntervalSet& a, int n) const;

  /// Tᵏx, or nullopt when x's orbit is not determined by stages up to `stage_cap`.
  std::optional<Scalar> orbit_point(const Scalar& x, std::int64_t k, int stage_cap) const;

  /// Least stage N with (h_N mod h)·w_N + μ(pool_N) < delta, and the tower
  /// whose base is every h-th level of it.
  RohlinTower rohlin_tower(std::int64_t h, const Scalar& delta) const;
  RohlinTower rohlin_tower_at(std::int64_t h, int stage) const;
  /// μ(E) for the tower rohlin_tower_at(h, stage) would build.
  Scalar rohlin_error_measure(std::int64_t h, int stage) const;

  IntervalSet evaluate(const SetExpr& e) const;

 private:
  template <class Stop>
  PartialImage walk(const IntervalSet& a, std::int64_t k, int max_stage, Stop stop) const;

  std::shared_ptr<Tower> tower_;
};

/// The stage-n levels making up a set that is a union of whole levels of
/// some stage. Answers "next member level at or above ℓ" at any deeper stage
/// without enumerating levels.
class LevelMask {
 public:
  /// Least stage ≤ max_stage at which `b` is a union of whole levels.
  static std::optional<LevelMask> align(const Engine& engine, const IntervalSet& b, int max_stage);

  int stage() const { return stage_; }
  const std::vector<std::int64_t>& members() const { return members_; }

  /// Smallest member-descended level ≥ level at stage m (m ≥ stage()).
  std::optional<std::int64_t> next_member(int m, std::int64_t level) const;

 private:
  LevelMask(const Tower& tower, int stage, std::vector<std::int64_t> members)
      : tower_(&tower), stage_(stage), members_(std::move(members)) {}

  std::optional<std::int64_t> first_member(int m) const;

  const Tower* tower_;
  int stage_;
  std::vector<std::int64_t> members_;
  mutable std::map<int, std::optional<std::int64_t>> first_;
};

/// Brute-force reference: the stage-n cells (levels, then the pool cut into
/// width-w_n pieces) and the cell-to-cell map given by T on cell midpoints.
struct GridOracle {
  int stage = 1;
  Scalar width;
  std::vector<Interval> cells;                 ///< index order: levels 0..h-1, then pool
  std::vector<std::optional<std::size_t>> next;  ///< T on cells; defined below the top level
  std::vector<std::optional<std::size_t>> prev;

  /// Cells wholly inside `s`.
  std::vector<std::size_t> cells_within(const IntervalSet& s) const;
  /// Cell counting of μ(TᵏA ∩ B) for cell-aligned A: cells whose k-step chain
  /// is defined add to lo, undefined chains add to hi only.
  CertifiedValue correlation(const IntervalSet& a, const IntervalSet& b, std::int64_t k) const;
};

GridOracle grid_oracle(const Engine& engine, int n);

}  // namespace rankone
