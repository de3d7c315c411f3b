#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankone/certified.hpp"
#include "rankone/engine.hpp"
#include "rankone/json_io.hpp"

namespace rankone {

struct Rect {
  IntervalSet x;
  IntervalSet y;
  bool operator==(const Rect&) const = default;
};

/// Finite union of pairwise disjoint rectangles in [0,1)², kept in a unique
/// canonical form: columns with the same vertical pattern are merged.
class RectSet {
 public:
  RectSet() = default;
  /// Throws ValidationError if the rectangle products overlap.
  static RectSet from_rects(std::vector<Rect> rects);
  static RectSet full() { return from_rects({{IntervalSet::full(), IntervalSet::full()}}); }
  static RectSet product(const IntervalSet& x, const IntervalSet& y) { return from_rects({{x, y}}); }

  const std::vector<Rect>& rects() const { return rects_; }
  bool empty() const { return rects_.empty(); }
  bool operator==(const RectSet&) const = default;

  /// Common-refinement grid: breakpoints on each axis and the cell bits
  /// (cells[i][j] for x-cell i, y-cell j).
  struct Grid {
    std::vector<Scalar> xs, ys;
    std::vector<std::vector<bool>> cells;
  };
  Grid grid() const;
  static RectSet from_grid(const Grid& g);

 private:
  std::vector<Rect> rects_;
};

RectSet unite(const RectSet& a, const RectSet& b);
RectSet intersect(const RectSet& a, const RectSet& b);
RectSet subtract(const RectSet& a, const RectSet& b);
RectSet symmetric_difference(const RectSet& a, const RectSet& b);
Scalar measure(const RectSet& a);

Json rect_set_to_json(const RectSet& a);
RectSet rect_set_from_json(const Json& j);

/// μ×μ((S×T)ᵏA ∩ B) as a sum of products of one-dimensional enclosures.
/// Each factor is computed to within factor_eps(A, B, eps), which keeps the
/// total width at most eps.
CertifiedValue product_correlation(const Engine& sx, const Engine& ty, const RectSet& a, const RectSet& b,
                                   std::int64_t k, const Scalar& eps);
Scalar factor_eps(const RectSet& a, const RectSet& b, const Scalar& eps);

StageRule rigid_rule();
StageRule mixing_rule();

struct Window {
  int rigid = 0;
  int mixing = 0;
};

/// Two schemes whose prefixes alternate rigid and mixing stages in opposite
/// phase: window (r, m) adds r rigid then m mixing stages to the first scheme
/// and m mixing then r rigid to the second. Both tails are the mixing rule.
std::pair<SchemeSpec, SchemeSpec> interleaved_pair(const std::vector<Window>& windows);

/// d(T^{h_n}L, L) for L = level `level` of stage n.
CertifiedValue rigid_displacement(const Engine& engine, int n, std::int64_t level, const Scalar& eps);

struct SequenceSpec {
  enum class Kind { Explicit, SchemeHeights, Arithmetic, Random };
  Kind kind = Kind::Explicit;
  std::vector<std::int64_t> values;  ///< Explicit
  int from_stage = 1, to_stage = 1;  ///< SchemeHeights: h_n for n in [from, to]
  std::int64_t start = 1, step = 1;  ///< Arithmetic
  std::int64_t count = 0;            ///< Arithmetic, Random
  std::uint64_t seed = 0;            ///< Random
  std::int64_t max_value = 1000;     ///< Random: values in [1, max_value]

  static SequenceSpec explicit_list(std::vector<std::int64_t> v);
  static SequenceSpec scheme_heights(int from, int to);
  static SequenceSpec arithmetic(std::int64_t start, std::int64_t step, std::int64_t count);
  static SequenceSpec random(std::uint64_t seed, std::int64_t count, std::int64_t max_value);

  /// The integers, distinct. `tower` supplies heights for SchemeHeights.
  std::vector<std::int64_t> materialize(const Tower* tower = nullptr) const;
  std::string describe() const;
};

/// `count` distinct integers in [1, max_value] from a 64-bit Mersenne
/// Twister, mapped by modulo so the output is the same on every platform.
std::vector<std::int64_t> seeded_distinct(std::uint64_t seed, std::int64_t count, std::int64_t max_value);

struct CoverageRow {
  std::int64_t length = 0;  ///< L
  std::int64_t k = 0;       ///< k_L
  CertifiedValue coverage;  ///< μ(⋃_{i≤L} T^{k_i}A)
};

std::vector<CoverageRow> sweep_probe(const Engine& engine, const IntervalSet& a,
                                     const std::vector<std::int64_t>& seq, const Scalar& eps);
std::vector<CoverageRow> sweep_probe(const Engine& sx, const Engine& ty, const RectSet& a,
                                     const std::vector<std::int64_t>& seq, const Scalar& eps);

/// Worst coverage over sampled tuples. Not exhaustive: other tuples may do worse.
struct UsoResult {
  std::uint64_t seed = 0;
  int n = 0;
  int trials = 0;
  std::int64_t max_value = 0;
  CertifiedValue worst;
  std::vector<std::int64_t> worst_tuple;
};

UsoResult uso_probe(const Engine& engine, const IntervalSet& a, int n, int trials, std::uint64_t seed,
                    const Scalar& eps, std::int64_t max_value = 1000);

struct ResidualWitness {
  bool member = false;
  RectSet a_prime;  ///< A ∪ (E×[0,1))
  Scalar deficit;   ///< μ(E)/n − μ×μ(A △ A′)
};

ResidualWitness residual_witness(const RectSet& a, const IntervalSet& e, std::int64_t n);

/// {x ∈ E : μ{y : (x,y) ∈ A} > 1 − eps}.
IntervalSet fiber_heavy_base(const RectSet& a, const IntervalSet& e, const Scalar& eps);

}  // namespace rankone
