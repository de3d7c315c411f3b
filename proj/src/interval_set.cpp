#include "rankone/interval_set.hpp"

#include <algorithm>

#include "rankone/errors.hpp"

namespace rankone {

namespace {

void check_bounds(const Interval& iv) {
  if (iv.lo < 0 || iv.hi > 1 || iv.hi < iv.lo) {
    throw ValidationError("interval [" + to_string(iv.lo) + "," + to_string(iv.hi) +
                          ") is not a subinterval of [0,1)");
  }
}

// Merges a sorted-by-lo list of nonempty intervals in place.
std::vector<Interval> merge_sorted(std::vector<Interval> sorted) {
  std::vector<Interval> out;
  out.reserve(sorted.size());
  for (auto& iv : sorted) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (iv.hi > out.back().hi) out.back().hi = std::move(iv.hi);
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

}  // namespace

IntervalSet::IntervalSet(const Scalar& lo, const Scalar& hi) {
  Interval iv{lo, hi};
  check_bounds(iv);
  if (lo < hi) intervals_.push_back(std::move(iv));
}

IntervalSet IntervalSet::from_intervals(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](const Interval& iv) {
    check_bounds(iv);
    return iv.lo == iv.hi;
  });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  IntervalSet s;
  s.intervals_ = merge_sorted(std::move(intervals));
  return s;
}

IntervalSet IntervalSet::from_canonical(std::vector<Interval> intervals) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    check_bounds(intervals[i]);
    if (intervals[i].lo >= intervals[i].hi) throw ValidationError("empty interval in canonical list");
    if (i > 0 && intervals[i - 1].hi >= intervals[i].lo) {
      throw ValidationError("intervals not sorted, disjoint and separated");
    }
  }
  IntervalSet s;
  s.intervals_ = std::move(intervals);
  return s;
}

bool IntervalSet::contains(const Scalar& x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](const Scalar& v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return x < it->hi;
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> all;
  all.reserve(a.size() + b.size());
  std::merge(a.intervals().begin(), a.intervals().end(), b.intervals().begin(),
             b.intervals().end(), std::back_inserter(all),
             [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  return IntervalSet::from_canonical(merge_sorted(std::move(all)));
}

IntervalSet unite_all(std::span<const IntervalSet> sets) {
  std::vector<Interval> all;
  for (const auto& s : sets) all.insert(all.end(), s.intervals().begin(), s.intervals().end());
  return IntervalSet::from_intervals(std::move(all));
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> out;
  const auto& x = a.intervals();
  const auto& y = b.intervals();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const Scalar& lo = x[i].lo < y[j].lo ? y[j].lo : x[i].lo;
    const Scalar& hi = x[i].hi < y[j].hi ? x[i].hi : y[j].hi;
    if (lo < hi) out.push_back({lo, hi});
    if (x[i].hi < y[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  // Pieces of two canonical sets never touch, so no merge pass is needed.
  return IntervalSet::from_canonical(std::move(out));
}

Scalar intersection_measure(const IntervalSet& a, const IntervalSet& b) {
  Scalar total = 0;
  const auto& x = a.intervals();
  const auto& y = b.intervals();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const Scalar& lo = x[i].lo < y[j].lo ? y[j].lo : x[i].lo;
    const Scalar& hi = x[i].hi < y[j].hi ? x[i].hi : y[j].hi;
    if (lo < hi) total += hi - lo;
    if (x[i].hi < y[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

IntervalSet complement(const IntervalSet& a) {
  std::vector<Interval> out;
  Scalar cursor = 0;
  for (const auto& iv : a.intervals()) {
    if (cursor < iv.lo) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < 1) out.push_back({cursor, Scalar(1)});
  return IntervalSet::from_canonical(std::move(out));
}

IntervalSet subtract(const IntervalSet& a, const IntervalSet& b) {
  return intersect(a, complement(b));
}

IntervalSet symmetric_difference(const IntervalSet& a, const IntervalSet& b) {
  return unite(subtract(a, b), subtract(b, a));
}

IntervalSet set_algebra(const IntervalSet& a, const IntervalSet& b, SetOp op) {
  switch (op) {
    case SetOp::Union:
      return unite(a, b);
    case SetOp::Intersect:
      return intersect(a, b);
    case SetOp::Difference:
      return subtract(a, b);
    case SetOp::SymmetricDifference:
      return symmetric_difference(a, b);
    case SetOp::ComplementOfA:
      return complement(a);
  }
  return {};
}

Scalar measure(const IntervalSet& a) {
  Scalar total = 0;
  for (const auto& iv : a.intervals()) total += iv.hi - iv.lo;
  return total;
}

Scalar distance(const IntervalSet& a, const IntervalSet& b) {
  return measure(a) + measure(b) - 2 * intersection_measure(a, b);
}

bool is_subset(const IntervalSet& inner, const IntervalSet& outer) {
  return intersection_measure(inner, outer) == measure(inner);
}

bool disjoint(const IntervalSet& a, const IntervalSet& b) {
  return intersection_measure(a, b) == 0;
}

IntervalSet leftmost_slice(const IntervalSet& a, const Scalar& mass) {
  if (mass < 0 || mass > measure(a)) {
    throw ValidationError("slice mass " + to_string(mass) + " outside [0, measure(A)]");
  }
  std::vector<Interval> out;
  Scalar left = mass;
  for (const auto& iv : a.intervals()) {
    if (left <= 0) break;
    Scalar len = iv.hi - iv.lo;
    if (len <= left) {
      out.push_back(iv);
      left -= len;
    } else {
      out.push_back({iv.lo, iv.lo + left});
      left = 0;
    }
  }
  return IntervalSet::from_canonical(std::move(out));
}

std::string describe(const IntervalSet& a) {
  if (a.empty()) return "∅";
  std::string s;
  for (const auto& iv : a.intervals()) {
    if (!s.empty()) s += " ∪ ";
    s += "[" + to_string(iv.lo) + "," + to_string(iv.hi) + ")";
  }
  return s;
}

}  // namespace rankone
