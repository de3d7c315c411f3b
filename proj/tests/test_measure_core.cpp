#include <doctest.h>

#include "rankone/errors.hpp"
#include "rankone/json_io.hpp"
#include "test_support.hpp"

using namespace rankone;
using rankone::testing::iv;
using rankone::testing::q;

TEST_CASE("rationals print in lowest terms") {
  CHECK(to_string(parse_rational("2/4")) == "1/2");
  CHECK(to_string(parse_rational("0")) == "0");
  CHECK(to_string(parse_rational("3/3")) == "1");
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("a/2"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ValidationError);
  CHECK(floor_to_int(q(-1, 3)) == -1);
  CHECK(floor_to_int(q(7, 3)) == 2);
}

TEST_CASE("canonical form merges touching and overlapping intervals") {
  auto s = IntervalSet::from_intervals({{q(1, 2), q(1)}, {q(0), q(1, 2)}});
  CHECK(s == IntervalSet::full());
  auto t = IntervalSet::from_intervals({{q(1, 4), q(1, 2)}, {q(0), q(1, 3)}, {q(1, 5), q(1, 5)}});
  REQUIRE(t.size() == 1);
  CHECK(t.intervals()[0] == Interval{q(0), q(1, 2)});
  CHECK_THROWS_AS(IntervalSet(q(0), q(2)), ValidationError);
  CHECK_THROWS_AS(IntervalSet::from_canonical({{q(0), q(1, 2)}, {q(1, 2), q(1)}}), ValidationError);
}

TEST_CASE("set algebra examples") {
  auto a = iv(0, 1, 1, 2), b = iv(1, 4, 3, 4);
  CHECK(set_algebra(a, b, SetOp::Intersect) == iv(1, 4, 1, 2));
  CHECK(set_algebra(IntervalSet(), b, SetOp::ComplementOfA) == IntervalSet::full());
  CHECK(set_algebra(a, b, SetOp::SymmetricDifference) == unite(iv(0, 1, 1, 4), iv(1, 2, 3, 4)));
  CHECK(set_algebra(a, b, SetOp::Difference) == iv(0, 1, 1, 4));
  CHECK(set_algebra(a, b, SetOp::Union) == iv(0, 1, 3, 4));
}

TEST_CASE("measure and distance examples") {
  CHECK(measure(unite(iv(0, 1, 2, 9), iv(1, 3, 1, 2))) == q(7, 18));
  CHECK(measure(IntervalSet()) == 0);
  CHECK(measure(IntervalSet::full()) == 1);
  auto a = iv(0, 1, 1, 2), b = iv(1, 4, 3, 4);
  CHECK(distance(a, b) == q(1, 2));
  CHECK(distance(a, a) == 0);
  CHECK(distance(IntervalSet(), IntervalSet::full()) == 1);
}

TEST_CASE("set operations agree with pointwise semantics") {
  std::mt19937_64 rng(7);
  const std::int64_t den = 24;
  for (int trial = 0; trial < 300; ++trial) {
    auto a = rankone::testing::random_set(rng, den);
    auto b = rankone::testing::random_set(rng, den);
    auto ia = rankone::testing::indicator(a, den);
    auto ib = rankone::testing::indicator(b, den);
    auto iu = rankone::testing::indicator(unite(a, b), den);
    auto ii = rankone::testing::indicator(intersect(a, b), den);
    auto id = rankone::testing::indicator(subtract(a, b), den);
    auto is = rankone::testing::indicator(symmetric_difference(a, b), den);
    auto ic = rankone::testing::indicator(complement(a), den);
    for (std::size_t k = 0; k < ia.size(); ++k) {
      CHECK(iu[k] == (ia[k] || ib[k]));
      CHECK(ii[k] == (ia[k] && ib[k]));
      CHECK(id[k] == (ia[k] && !ib[k]));
      CHECK(is[k] == (ia[k] != ib[k]));
      CHECK(ic[k] == !ia[k]);
    }
    CHECK(intersection_measure(a, b) == measure(intersect(a, b)));
  }
}

TEST_CASE("leftmost slice") {
  auto b = unite(iv(0, 1, 1, 9), iv(1, 3, 1, 2));
  CHECK(leftmost_slice(b, q(1, 18)) == iv(0, 1, 1, 18));
  CHECK(leftmost_slice(b, q(1, 9) + q(1, 12)) == unite(iv(0, 1, 1, 9), iv(1, 3, 5, 12)));
  CHECK(leftmost_slice(b, measure(b)) == b);
  CHECK_THROWS_AS(leftmost_slice(b, q(1)), ValidationError);
}

TEST_CASE("interval set JSON round trip is byte-identical") {
  auto s = unite(iv(0, 1, 2, 9), iv(1, 3, 1, 1));
  std::string text = serialize_interval_set(s);
  CHECK(text == R"([["0","2/9"],["1/3","1"]])");
  CHECK(parse_interval_set(text) == s);
  CHECK(serialize_interval_set(parse_interval_set(text)) == text);
  CHECK(serialize_interval_set(IntervalSet()) == "[]");
  CHECK_THROWS_AS(parse_interval_set(R"([["1/2","1/4"]])"), ValidationError);
  CHECK_THROWS_AS(parse_interval_set(R"([["0","1/2"],["1/2","1"]])"), ValidationError);
}
