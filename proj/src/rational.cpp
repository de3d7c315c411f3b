#include "rankone/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "rankone/errors.hpp"

namespace rankone {

std::string to_string(const Scalar& value) { return value.get_str(10); }

namespace {

bool is_integer_text(std::string_view text) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

}  // namespace

Scalar parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"}
                                                         : text.substr(slash + 1);
  if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-' || den[0] == '+') {
    throw ValidationError("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
  Scalar q(n, d);
  q.canonicalize();
  return q;
}

std::int64_t floor_to_int(const Scalar& value) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  if (!f.fits_slong_p()) throw std::overflow_error("rational floor exceeds 64 bits");
  return f.get_si();
}

}  // namespace rankone
