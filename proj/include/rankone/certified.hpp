#pragma once

#include "rankone/rational.hpp"

namespace rankone {

/// Exact rational enclosure [lo, hi] of a quantity that finite-stage
/// computation cannot always pin down (for example μ(TᵏA ∩ B)).
struct CertifiedValue {
  Scalar lo;
  Scalar hi;

  static CertifiedValue exact(const Scalar& v) { return {v, v}; }

  Scalar width() const { return hi - lo; }
  bool is_exact() const { return lo == hi; }
  bool contains(const Scalar& v) const { return lo <= v && v <= hi; }
  bool operator==(const CertifiedValue&) const = default;
};

inline CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

/// Product of two enclosures of nonnegative quantities.
inline CertifiedValue multiply_nonnegative(const CertifiedValue& a, const CertifiedValue& b) {
  return {a.lo * b.lo, a.hi * b.hi};
}

}  // namespace rankone
