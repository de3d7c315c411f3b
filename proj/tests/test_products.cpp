#include <doctest.h>

#include <set>

#include "rankone/errors.hpp"
#include "rankone/products.hpp"
#include "test_support.hpp"

using namespace rankone;
using rankone::testing::iv;
using rankone::testing::q;
using rankone::testing::random_set;

namespace {

RectSet random_rects(std::mt19937_64& rng) {
  // Disjoint by construction: a random x-partition, random fiber per piece.
  std::uniform_int_distribution<int> cut(1, 11);
  std::vector<Rect> rects;
  std::int64_t at = 0;
  while (at < 12) {
    std::int64_t next = std::min<std::int64_t>(12, at + cut(rng) % 4 + 1);
    rects.push_back({iv(at, 12, next, 12), random_set(rng, 12, 3)});
    at = next;
  }
  return RectSet::from_rects(std::move(rects));
}

// Membership on the 24×24 grid of cell midpoints.
std::vector<bool> cells(const RectSet& s) {
  std::vector<bool> out;
  for (int i = 0; i < 24; ++i) {
    for (int j = 0; j < 24; ++j) {
      Scalar x = q(2 * i + 1, 48), y = q(2 * j + 1, 48);
      bool in = false;
      for (const auto& r : s.rects()) in = in || (r.x.contains(x) && r.y.contains(y));
      out.push_back(in);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("rectangle set algebra") {
  auto full = RectSet::full();
  CHECK(measure(full) == 1);
  CHECK_THROWS_AS(RectSet::from_rects({{iv(0, 1, 1, 2), IntervalSet::full()}, {iv(1, 4, 1, 1), iv(0, 1, 1, 2)}}),
                  ValidationError);

  // Two ways of cutting the same L-shape give the same canonical form.
  auto l1 = RectSet::from_rects({{iv(0, 1, 1, 2), IntervalSet::full()}, {iv(1, 2, 1, 1), iv(0, 1, 1, 2)}});
  auto l2 = RectSet::from_rects({{IntervalSet::full(), iv(0, 1, 1, 2)}, {iv(0, 1, 1, 2), iv(1, 2, 1, 1)}});
  CHECK(l1 == l2);
  CHECK(measure(l1) == q(3, 4));
  CHECK(subtract(full, l1) == RectSet::product(iv(1, 2, 1, 1), iv(1, 2, 1, 1)));

  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    auto a = random_rects(rng), b = random_rects(rng);
    auto ca = cells(a), cb = cells(b);
    auto check = [&](const RectSet& got, auto op) {
      auto cg = cells(got);
      for (std::size_t i = 0; i < cg.size(); ++i) CHECK(cg[i] == op(ca[i], cb[i]));
    };
    check(unite(a, b), [](bool x, bool y) { return x || y; });
    check(intersect(a, b), [](bool x, bool y) { return x && y; });
    check(subtract(a, b), [](bool x, bool y) { return x && !y; });
    check(symmetric_difference(a, b), [](bool x, bool y) { return x != y; });
    CHECK(measure(unite(a, b)) + measure(intersect(a, b)) == measure(a) + measure(b));
    CHECK(RectSet::from_grid(a.grid()) == a);
    CHECK(rect_set_from_json(rect_set_to_json(a)) == a);
  }
}

TEST_CASE("product correlations") {
  Engine c(chacon3()), s(staircase4());
  auto full = RectSet::full();
  for (std::int64_t k : {1, 5, 40}) CHECK(product_correlation(c, s, full, full, k, default_epsilon()) == CertifiedValue::exact(1));

  auto u = iv(0, 1, 1, 3), u2 = iv(1, 9, 1, 2);
  for (std::int64_t k : {1, 3, 7}) {
    auto p = product_correlation(c, s, RectSet::product(u, IntervalSet::full()), RectSet::product(u2, IntervalSet::full()), k,
                                 default_epsilon());
    auto one = c.correlation(u, u2, k, default_epsilon() / 3);
    CHECK(p == one);
  }

  auto base = iv(0, 1, 2, 9);
  auto sq = product_correlation(c, c, RectSet::product(base, base), RectSet::product(base, base), 4, default_epsilon());
  auto one = c.correlation(base, base, 4, default_epsilon());
  CHECK(sq == multiply_nonnegative(one, one));

  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    auto a = random_rects(rng), b = random_rects(rng);
    for (std::int64_t k : {1, 4, 13}) {
      auto v = product_correlation(c, s, a, b, k, q(1, 1000));
      CHECK(v.width() <= q(1, 1000));
      CHECK(v.lo >= 0);
      CHECK(v.hi <= std::min(measure(a), measure(b)));
    }
  }
}

TEST_CASE("interleaved scheme pairs") {
  auto [s1, s2] = interleaved_pair({{1, 2}});
  CHECK(s1.prefix == std::vector<StageRule>{rigid_rule()});
  CHECK(s2.prefix == std::vector<StageRule>{mixing_rule(), mixing_rule(), rigid_rule()});
  CHECK(s1.tail == mixing_rule());

  auto [m1, m2] = interleaved_pair({{0, 3}, {0, 1}});
  CHECK(m1 == staircase4());
  CHECK(m2 == staircase4());

  CHECK_THROWS_AS(interleaved_pair({}), ValidationError);
  CHECK_THROWS_AS(interleaved_pair({{0, 0}}), ValidationError);

  // Rigid stages: only the top and bottom copies of a level move.
  auto [r1, r2] = interleaved_pair({{4, 1}});
  Engine e(r1);
  for (int n = 1; n <= 4; ++n) {
    const auto& t = e.tower();
    auto g = grid_oracle(e, n + 1);
    for (std::int64_t l = 0; l < t.height(n); ++l) {
      auto d = rigid_displacement(e, n, l, default_epsilon());
      CHECK(d.hi <= Scalar(2, 3) * t.height(n) * t.width(n));
      CHECK(d.hi <= Scalar(2, 3) * t.width(n));
      auto lv = IntervalSet::from_intervals({t.level_interval(n, l)});
      auto oc = g.correlation(lv, lv, t.height(n));
      // d = 2(w − μ(TʰL ∩ L)): the oracle's lower bound gives an upper bound on d.
      CHECK(d.hi <= 2 * (t.width(n) - oc.lo));
      CHECK(d.lo >= 2 * (t.width(n) - oc.hi));
    }
  }
}

TEST_CASE("sequences") {
  CHECK(SequenceSpec::arithmetic(3, 2, 4).materialize() == std::vector<std::int64_t>{3, 5, 7, 9});
  Tower t(chacon3());
  CHECK(SequenceSpec::scheme_heights(1, 4).materialize(&t) == std::vector<std::int64_t>{1, 4, 13, 40});
  auto r1 = SequenceSpec::random(7, 20, 100).materialize();
  auto r2 = SequenceSpec::random(7, 20, 100).materialize();
  CHECK(r1 == r2);
  CHECK(std::set<std::int64_t>(r1.begin(), r1.end()).size() == 20);
  for (auto v : r1) CHECK((v >= 1 && v <= 100));
  CHECK(SequenceSpec::random(8, 20, 100).materialize() != r1);
  // Modulo mapping of the raw generator output.
  std::mt19937_64 gen(7);
  CHECK(r1.front() == static_cast<std::int64_t>(gen() % 100) + 1);
  CHECK_THROWS_AS(SequenceSpec::explicit_list({1, 2, 1}).materialize(), ValidationError);
  CHECK_THROWS_AS(SequenceSpec::arithmetic(1, 0, 2).materialize(), ValidationError);
  CHECK_THROWS_AS(SequenceSpec::random(1, 5, 3).materialize(), ValidationError);
}

TEST_CASE("sweep probes") {
  Engine c(chacon3());
  auto full_rows = sweep_probe(c, IntervalSet::full(), {5, 9}, default_epsilon());
  CHECK(full_rows[0].coverage == CertifiedValue::exact(1));

  auto base = iv(0, 1, 2, 9);
  auto seq = SequenceSpec::arithmetic(1, 1, 200).materialize();
  auto rows = sweep_probe(c, base, seq, q(1, 1000));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].coverage.lo >= rows[i - 1].coverage.lo);
  CHECK(rows.back().coverage.lo >= q(99, 100));

  // Oracle: union of the one-by-one images.
  IntervalSet direct;
  for (std::int64_t k : {1, 2, 3, 4, 5}) direct = unite(direct, c.forward_image(base, k, q(1, 5000)).resolved);
  CHECK(measure(direct) <= rows[4].coverage.hi);
  CHECK(rows[4].coverage.lo <= measure(direct) + q(1, 5000) * 5);

  auto prod = sweep_probe(c, c, RectSet::product(base, IntervalSet::full()), {1, 2, 3}, default_epsilon());
  auto one = sweep_probe(c, base, {1, 2, 3}, default_epsilon());
  for (int i = 0; i < 3; ++i) {
    CHECK(prod[i].coverage.lo <= one[i].coverage.hi);
    CHECK(one[i].coverage.lo <= prod[i].coverage.hi);
  }
  CHECK_THROWS_AS(sweep_probe(c, IntervalSet{}, {1}, default_epsilon()), ValidationError);

  // Heights avoid most of the obstruction set.
  auto a = iv(0, 1, 1, 5);
  auto heights = SequenceSpec::scheme_heights(1, 12).materialize(&c.tower());
  auto hr = sweep_probe(c, a, heights, default_epsilon());
  IntervalSet pre = a;
  pre = unite(pre, c.forward_image(a, -1, default_epsilon()).resolved);
  Scalar b_lo = 1 - measure(pre) - default_epsilon();
  CHECK(hr.back().coverage.lo < 1 - b_lo / 2);
}

TEST_CASE("uniform sweeping probe") {
  Engine s(staircase4());
  auto a = iv(0, 1, 1, 7);
  auto r = uso_probe(s, a, 1, 10, 3, default_epsilon());
  CHECK(r.worst == CertifiedValue::exact(q(1, 7)));
  auto f = uso_probe(s, IntervalSet::full(), 4, 5, 3, default_epsilon());
  CHECK(f.worst == CertifiedValue::exact(1));

  auto b3 = IntervalSet::from_intervals({s.tower().level_interval(3, 0)});
  auto x = uso_probe(s, b3, 8, 64, 1, default_epsilon());
  auto y = uso_probe(s, b3, 8, 64, 1, default_epsilon());
  CHECK(x.worst == y.worst);
  CHECK(x.worst_tuple == y.worst_tuple);
  CHECK(x.worst_tuple.size() == 8);
  CHECK(x.worst.lo >= measure(b3));
}

TEST_CASE("residual witnesses and heavy fibers") {
  auto e = iv(1, 4, 1, 2);
  auto big = RectSet::product(iv(0, 1, 3, 4), IntervalSet::full());
  auto w = residual_witness(big, e, 3);
  CHECK(w.member);
  CHECK(w.a_prime == big);
  CHECK(w.deficit == q(1, 12));

  auto none = residual_witness(RectSet{}, e, 1);
  CHECK_FALSE(none.member);
  CHECK(none.deficit == 0);

  std::int64_t n = 4;
  // Remove a horizontal strip of mass μ(E)/(2n) = 1/32: height 1/8 over E.
  auto strip = RectSet::product(e, iv(0, 1, 1, 8));
  auto a = subtract(RectSet::product(e, IntervalSet::full()), strip);
  auto ws = residual_witness(a, e, n);
  CHECK(ws.member);
  CHECK(ws.deficit == q(1, 16) - q(1, 32));

  CHECK(fiber_heavy_base(RectSet::full(), e, q(1, 3)) == e);
  CHECK(fiber_heavy_base(RectSet::product(e, iv(0, 1, 1, 2)), e, q(1, 3)).empty());
  auto mixed = RectSet::from_rects({{iv(0, 1, 1, 3), iv(0, 1, 2, 3)}, {iv(1, 3, 1, 1), iv(0, 1, 9, 10)}});
  CHECK(fiber_heavy_base(mixed, IntervalSet::full(), q(1, 3)) == iv(1, 3, 1, 1));
  CHECK(fiber_heavy_base(mixed, IntervalSet::full(), q(1, 2)) == IntervalSet::full());

  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    auto ra = random_rects(rng);
    auto re = random_set(rng, 12, 3);
    auto f1 = fiber_heavy_base(ra, re, q(1, 4));
    auto f2 = fiber_heavy_base(ra, re, q(1, 2));
    CHECK(is_subset(f1, re));
    CHECK(is_subset(f1, f2));
  }
}
