#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace rankone {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
using Scalar = mpq_class;

/// "p/q" in lowest terms; integers print without a denominator ("0", "1").
std::string to_string(const Scalar& value);

/// Parses "p/q", "p" or "-p/q". Non-canonical input ("2/4") is accepted and
/// reduced. Throws ValidationError on malformed text or a zero denominator.
Scalar parse_rational(std::string_view text);

/// floor(value) as a 64-bit integer. Throws std::overflow_error if it does not fit.
std::int64_t floor_to_int(const Scalar& value);

inline Scalar make_scalar(std::int64_t num, std::int64_t den = 1) {
  Scalar q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  q.canonicalize();
  return q;
}

}  // namespace rankone
