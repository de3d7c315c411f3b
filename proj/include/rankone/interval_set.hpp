#pragma once

#include <span>
#include <string>
#include <vector>

#include "rankone/rational.hpp"

namespace rankone {

/// Half-open interval [lo, hi).
struct Interval {
  Scalar lo;
  Scalar hi;

  Scalar length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Finite union of disjoint half-open subintervals of [0,1) in canonical form:
/// sorted, pairwise disjoint, and no two intervals touching. Structural
/// equality is therefore set equality.
class IntervalSet {
 public:
  IntervalSet() = default;

  /// The single interval [lo, hi). Empty when lo == hi.
  IntervalSet(const Scalar& lo, const Scalar& hi);

  /// Builds the canonical union of arbitrary (possibly overlapping, unsorted)
  /// intervals. Empty intervals are dropped. Throws ValidationError if an
  /// interval leaves [0,1) or has hi < lo.
  static IntervalSet from_intervals(std::vector<Interval> intervals);

  /// Wraps intervals that are already canonical. Throws ValidationError if not.
  static IntervalSet from_canonical(std::vector<Interval> intervals);

  static IntervalSet full() { return IntervalSet(Scalar(0), Scalar(1)); }

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  bool contains(const Scalar& x) const;

  bool operator==(const IntervalSet&) const = default;

 private:
  std::vector<Interval> intervals_;
};

enum class SetOp { Union, Intersect, Difference, SymmetricDifference, ComplementOfA };

IntervalSet unite(const IntervalSet& a, const IntervalSet& b);
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet subtract(const IntervalSet& a, const IntervalSet& b);
IntervalSet symmetric_difference(const IntervalSet& a, const IntervalSet& b);
IntervalSet complement(const IntervalSet& a);

/// Dispatches on `op`; `b` is ignored for ComplementOfA.
IntervalSet set_algebra(const IntervalSet& a, const IntervalSet& b, SetOp op);

/// Union of many sets at once (one sort instead of repeated merges).
IntervalSet unite_all(std::span<const IntervalSet> sets);

/// Lebesgue measure.
Scalar measure(const IntervalSet& a);

/// d(A,B) = measure of the symmetric difference.
Scalar distance(const IntervalSet& a, const IntervalSet& b);

/// measure(A ∩ B) without materializing the intersection.
Scalar intersection_measure(const IntervalSet& a, const IntervalSet& b);

bool is_subset(const IntervalSet& inner, const IntervalSet& outer);
bool disjoint(const IntervalSet& a, const IntervalSet& b);

/// The leftmost part of A with the given measure. Requires 0 <= mass <= measure(A).
IntervalSet leftmost_slice(const IntervalSet& a, const Scalar& mass);

/// "[a,b) ∪ [c,d)" or "∅"; for diagnostics only.
std::string describe(const IntervalSet& a);

}  // namespace rankone
