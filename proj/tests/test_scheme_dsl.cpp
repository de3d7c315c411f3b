#include <doctest.h>

#include "rankone/errors.hpp"
#include "rankone/scheme.hpp"
#include "rankone/set_expr.hpp"
#include "rankone/tower.hpp"
#include "test_support.hpp"

using namespace rankone;
using rankone::testing::q;

namespace {

// Independent of normalize(): w₁ times the partial sums of stage masses
// h₁ + Σ_{n≤N} spacers_n / ∏_{j≤n} r_j.
Scalar partial_total(const SchemeSpec& spec, const Scalar& w1, int terms) {
  Scalar total = w1;
  Scalar w = w1;
  for (int n = 1; n <= terms; ++n) {
    const StageRule& r = spec.rule_for(n);
    w /= r.cuts;
    total += r.spacer_count() * w;
  }
  return total;
}

}  // namespace

TEST_CASE("block rule compilation") {
  SchemeSpec chacon = compile_block_rule("B B 1 B");
  CHECK(chacon.prefix.empty());
  CHECK(chacon.tail == StageRule{3, {0, 1, 0}});
  CHECK(same_rules(chacon, chacon3()));
  CHECK(compile_block_rule("B B").tail == StageRule{2, {0, 0}});
  CHECK(compile_block_rule("B 1 B 2 B 3 B").tail == StageRule{4, {1, 2, 3, 0}});
  CHECK(compile_block_rule("BB1B").tail == StageRule{3, {0, 1, 0}});
  CHECK(compile_block_rule("B B 2 B 1").tail == StageRule{3, {0, 2, 1}});
  CHECK_THROWS_AS(compile_block_rule("B"), ValidationError);
  CHECK_THROWS_AS(compile_block_rule("1 B B"), ValidationError);
  try {
    compile_block_rule("B B x B");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(compile_block_rule("B 0 B"), ParseError);
}

TEST_CASE("compiled Chacon rule reproduces heights 1, 4, 13, 40, 121") {
  SchemeSpec chacon = compile_block_rule("B B 1 B");
  std::int64_t expected = 1;
  for (int n = 1; n <= 6; ++n) {
    CHECK(build_stage(chacon, n).height == expected);
    expected = 3 * expected + 1;
  }
}

TEST_CASE("scheme file parsing") {
  CHECK(parse_scheme("chacon3") == chacon3());
  CHECK(parse_scheme("  staircase4  # mixing flavour\n") == staircase4());

  SchemeSpec s = parse_scheme("prefix: cuts=2 spacers=[0,1]\ntail: cuts=3 spacers=[0,1,0]\n");
  REQUIRE(s.prefix.size() == 1);
  CHECK(s.prefix[0] == StageRule{2, {0, 1}});
  CHECK(s.tail == StageRule{3, {0, 1, 0}});
  CHECK_FALSE(s.name.has_value());

  CHECK(same_rules(parse_scheme("block: B B 1 B"), chacon3()));
  CHECK_THROWS_AS(parse_scheme("tail: cuts=1 spacers=[0]"), ValidationError);
  CHECK_THROWS_AS(parse_scheme("tail: cuts=2 spacers=[0,-1]"), ValidationError);
  CHECK_THROWS_AS(parse_scheme("tail: cuts=3 spacers=[0,1]"), ValidationError);
  CHECK_THROWS_AS(parse_scheme("nosuchpreset"), ParseError);
  CHECK_THROWS_AS(parse_scheme("prefix: cuts=2 spacers=[0,0]"), ParseError);
  try {
    parse_scheme("# header\ntail: cuts=3 spacers=[0,1 0]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("scheme serialization round-trips") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> cuts(2, 5), spacer(0, 3), plen(0, 3);
  auto random_rule = [&] {
    StageRule r;
    r.cuts = cuts(rng);
    r.spacers.clear();
    for (int i = 0; i < r.cuts; ++i) r.spacers.push_back(spacer(rng));
    return r;
  };
  for (int trial = 0; trial < 100; ++trial) {
    SchemeSpec s;
    for (int i = plen(rng); i > 0; --i) s.prefix.push_back(random_rule());
    s.tail = random_rule();
    CHECK(parse_scheme(serialize_scheme(s)) == s);
  }
  CHECK(parse_scheme(serialize_scheme(chacon3())) == chacon3());
  CHECK(serialize_scheme(staircase4()) == "staircase4\n");
}

TEST_CASE("normalization") {
  Normalization c = normalize(chacon3());
  CHECK(c.base_width == q(2, 3));
  CHECK(c.spacer_mass == q(1, 3));

  Normalization d = normalize(SchemeSpec{{}, StageRule{2, {0, 0}}, std::nullopt});
  CHECK(d.base_width == 1);
  CHECK(d.spacer_mass == 0);

  Normalization s = normalize(staircase4());
  CHECK(s.base_width == q(1, 3));
  CHECK(s.spacer_mass == q(2, 3));

  // Partial sums approach 1 from below with a geometrically shrinking gap.
  for (const auto& spec : {chacon3(), staircase4(), parse_scheme("prefix: cuts=2 spacers=[1,0]; cuts=5 spacers=[0,0,2,0,1]\ntail: cuts=3 spacers=[2,0,1]")}) {
    Scalar w1 = normalize(spec).base_width;
    Scalar prev_gap = 1;
    for (int terms = 5; terms <= 40; terms += 5) {
      Scalar gap = 1 - partial_total(spec, w1, terms);
      CHECK(gap >= 0);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap < q(1, 1'000'000));
  }
}

TEST_CASE("doubling tail spacers shrinks the base width") {
  SchemeSpec a = staircase4();
  SchemeSpec b = a;
  b.name.reset();
  for (auto& s : b.tail.spacers) s *= 2;
  CHECK(normalize(b).base_width < normalize(a).base_width);
}

TEST_CASE("set expression parsing") {
  SetExpr e = parse_set_expr("interval(0,1/2)");
  CHECK(e.kind == SetExpr::Kind::Interval);
  CHECK(e.lo == 0);
  CHECK(e.hi == q(1, 2));

  SetExpr u = parse_set_expr("union(levels(3, 0..3), pool(3))");
  CHECK(u.kind == SetExpr::Kind::Union);
  REQUIRE(u.children.size() == 2);
  CHECK(u.children[0].indices == std::vector<std::int64_t>{0, 1, 2, 3});
  CHECK(u.children[1].kind == SetExpr::Kind::Pool);

  SetExpr l = parse_set_expr("levels(2, [0,2])");
  CHECK(l.stage == 2);
  CHECK(l.indices == std::vector<std::int64_t>{0, 2});

  SetExpr nested = parse_set_expr("difference(complement(base(2)), intersect(interval(1/3, 2/3), pool(1)))");
  CHECK(parse_set_expr(to_string(nested)) == nested);

  CHECK_THROWS_AS(parse_set_expr("interval(0,1/2"), ParseError);
  CHECK_THROWS_AS(parse_set_expr("levels(0, [1])"), ParseError);
  CHECK_THROWS_AS(parse_set_expr("square(1)"), ParseError);
  CHECK_THROWS_AS(parse_set_expr("base(2) junk"), ParseError);
}
