#include "rankone/products.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "rankone/errors.hpp"

namespace rankone {

namespace {

std::vector<Scalar> breakpoints(const std::vector<const IntervalSet*>& sets) {
  std::vector<Scalar> pts{Scalar(0), Scalar(1)};
  for (const auto* s : sets) {
    for (const auto& iv : s->intervals()) {
      pts.push_back(iv.lo);
      pts.push_back(iv.hi);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<Scalar> merge_points(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  std::vector<Scalar> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Index of the cell of `pts` containing x.
std::size_t cell_of(const std::vector<Scalar>& pts, const Scalar& x) {
  return static_cast<std::size_t>(std::upper_bound(pts.begin(), pts.end(), x) - pts.begin()) - 1;
}

RectSet combine(const RectSet& a, const RectSet& b, SetOp op) {
  auto ga = a.grid(), gb = b.grid();
  RectSet::Grid g;
  g.xs = merge_points(ga.xs, gb.xs);
  g.ys = merge_points(ga.ys, gb.ys);
  for (std::size_t i = 0; i + 1 < g.xs.size(); ++i) {
    Scalar mx = (g.xs[i] + g.xs[i + 1]) / 2;
    std::size_t ia = cell_of(ga.xs, mx), ib = cell_of(gb.xs, mx);
    std::vector<bool> col;
    for (std::size_t j = 0; j + 1 < g.ys.size(); ++j) {
      Scalar my = (g.ys[j] + g.ys[j + 1]) / 2;
      bool in_a = ga.cells[ia][cell_of(ga.ys, my)];
      bool in_b = gb.cells[ib][cell_of(gb.ys, my)];
      bool v = false;
      switch (op) {
        case SetOp::Union: v = in_a || in_b; break;
        case SetOp::Intersect: v = in_a && in_b; break;
        case SetOp::Difference: v = in_a && !in_b; break;
        case SetOp::SymmetricDifference: v = in_a != in_b; break;
        case SetOp::ComplementOfA: v = !in_a; break;
      }
      col.push_back(v);
    }
    g.cells.push_back(std::move(col));
  }
  return RectSet::from_grid(g);
}

// Certified coverage of a union of images, using μ(T^{k}A) = μ(A).
CertifiedValue coverage(const Scalar& covered, const Scalar& pending, const Scalar& single, std::int64_t terms) {
  Scalar lo = std::max(covered, single);
  Scalar hi = std::min({Scalar(1), Scalar(covered + pending), Scalar(single * terms)});
  return {lo, std::max(lo, hi)};
}

}  // namespace

RectSet::Grid RectSet::grid() const {
  std::vector<const IntervalSet*> xs, ys;
  for (const auto& r : rects_) {
    xs.push_back(&r.x);
    ys.push_back(&r.y);
  }
  Grid g;
  g.xs = breakpoints(xs);
  g.ys = breakpoints(ys);
  g.cells.assign(g.xs.size() - 1, std::vector<bool>(g.ys.size() - 1, false));
  for (const auto& r : rects_) {
    for (const auto& ix : r.x.intervals()) {
      for (std::size_t i = cell_of(g.xs, ix.lo); i + 1 < g.xs.size() && g.xs[i] < ix.hi; ++i) {
        for (const auto& iy : r.y.intervals()) {
          for (std::size_t j = cell_of(g.ys, iy.lo); j + 1 < g.ys.size() && g.ys[j] < iy.hi; ++j) {
            g.cells[i][j] = true;
          }
        }
      }
    }
  }
  return g;
}

RectSet RectSet::from_grid(const Grid& g) {
  // Group x-cells by their fiber; the fiber set is independent of the grid.
  std::map<std::vector<Interval>, std::vector<Interval>, bool (*)(const std::vector<Interval>&, const std::vector<Interval>&)>
      by_fiber([](const std::vector<Interval>& a, const std::vector<Interval>& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Interval& p, const Interval& q) {
          return p.lo < q.lo || (p.lo == q.lo && p.hi < q.hi);
        });
      });
  for (std::size_t i = 0; i + 1 < g.xs.size(); ++i) {
    std::vector<Interval> rows;
    for (std::size_t j = 0; j + 1 < g.ys.size(); ++j) {
      if (g.cells[i][j]) rows.push_back({g.ys[j], g.ys[j + 1]});
    }
    if (rows.empty()) continue;
    auto fiber = IntervalSet::from_intervals(std::move(rows)).intervals();
    by_fiber[fiber].push_back({g.xs[i], g.xs[i + 1]});
  }
  std::vector<Rect> rects;
  for (auto& [fiber, cols] : by_fiber) {
    rects.push_back({IntervalSet::from_intervals(cols), IntervalSet::from_canonical(fiber)});
  }
  std::sort(rects.begin(), rects.end(), [](const Rect& a, const Rect& b) {
    return a.x.intervals().front().lo < b.x.intervals().front().lo;
  });
  RectSet out;
  out.rects_ = std::move(rects);
  return out;
}

RectSet RectSet::from_rects(std::vector<Rect> rects) {
  std::erase_if(rects, [](const Rect& r) { return r.x.empty() || r.y.empty(); });
  Scalar total = 0;
  for (const auto& r : rects) total += measure(r.x) * measure(r.y);
  RectSet raw;
  raw.rects_ = std::move(rects);
  RectSet canon = from_grid(raw.grid());
  if (measure(canon) != total) throw ValidationError("rectangles overlap");
  return canon;
}

RectSet unite(const RectSet& a, const RectSet& b) { return combine(a, b, SetOp::Union); }
RectSet intersect(const RectSet& a, const RectSet& b) { return combine(a, b, SetOp::Intersect); }
RectSet subtract(const RectSet& a, const RectSet& b) { return combine(a, b, SetOp::Difference); }
RectSet symmetric_difference(const RectSet& a, const RectSet& b) {
  return combine(a, b, SetOp::SymmetricDifference);
}

Scalar measure(const RectSet& a) {
  Scalar m = 0;
  for (const auto& r : a.rects()) m += measure(r.x) * measure(r.y);
  return m;
}

Json rect_set_to_json(const RectSet& a) {
  Json j = Json::array();
  for (const auto& r : a.rects()) j.push_back({{"x", interval_set_to_json(r.x)}, {"y", interval_set_to_json(r.y)}});
  return j;
}

RectSet rect_set_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("rectangle set must be a JSON array");
  std::vector<Rect> rects;
  for (const auto& r : j) {
    if (!r.is_object() || !r.contains("x") || !r.contains("y")) {
      throw ValidationError("rectangle entries need \"x\" and \"y\"");
    }
    rects.push_back({interval_set_from_json(r["x"]), interval_set_from_json(r["y"])});
  }
  return RectSet::from_rects(std::move(rects));
}

Scalar factor_eps(const RectSet& a, const RectSet& b, const Scalar& eps) {
  std::size_t terms = std::max<std::size_t>(1, a.rects().size() * b.rects().size());
  return eps / Scalar(3 * static_cast<long>(terms));
}

CertifiedValue product_correlation(const Engine& sx, const Engine& ty, const RectSet& a, const RectSet& b,
                                   std::int64_t k, const Scalar& eps) {
  if (eps <= 0) throw ValidationError("epsilon must be positive");
  CertifiedValue total = CertifiedValue::exact(0);
  if (a.empty() || b.empty()) return total;
  Scalar e = factor_eps(a, b, eps);
  for (const auto& ra : a.rects()) {
    for (const auto& rb : b.rects()) {
      auto fx = sx.correlation(ra.x, rb.x, k, e);
      auto fy = ty.correlation(ra.y, rb.y, k, e);
      fx.hi = std::min({fx.hi, measure(ra.x), measure(rb.x)});
      fy.hi = std::min({fy.hi, measure(ra.y), measure(rb.y)});
      total = total + multiply_nonnegative(fx, fy);
    }
  }
  return total;
}

StageRule rigid_rule() { return StageRule{3, {0, 0, 0}}; }
StageRule mixing_rule() { return staircase4().tail; }

std::pair<SchemeSpec, SchemeSpec> interleaved_pair(const std::vector<Window>& windows) {
  if (windows.empty()) throw ValidationError("no windows given");
  SchemeSpec s1, s2;
  for (const auto& w : windows) {
    if (w.rigid < 0 || w.mixing < 0 || w.rigid + w.mixing < 1) {
      throw ValidationError("window lengths must be nonnegative and not both zero");
    }
    for (int i = 0; i < w.rigid; ++i) s1.prefix.push_back(rigid_rule());
    for (int i = 0; i < w.mixing; ++i) s1.prefix.push_back(mixing_rule());
    for (int i = 0; i < w.mixing; ++i) s2.prefix.push_back(mixing_rule());
    for (int i = 0; i < w.rigid; ++i) s2.prefix.push_back(rigid_rule());
  }
  for (auto* s : {&s1, &s2}) {
    s->tail = mixing_rule();
    while (!s->prefix.empty() && s->prefix.back() == s->tail) s->prefix.pop_back();
    if (s->prefix.empty()) *s = staircase4();
  }
  return {s1, s2};
}

CertifiedValue rigid_displacement(const Engine& engine, int n, std::int64_t level, const Scalar& eps) {
  const Tower& t = engine.tower();
  if (level < 0 || level >= t.height(n)) throw ValidationError("level outside the stage");
  IntervalSet l = IntervalSet::from_intervals({t.level_interval(n, level)});
  auto c = engine.correlation(l, l, t.height(n), eps);
  const Scalar& w = t.width(n);
  return {2 * (w - c.hi), 2 * (w - c.lo)};
}

SequenceSpec SequenceSpec::explicit_list(std::vector<std::int64_t> v) {
  SequenceSpec s;
  s.kind = Kind::Explicit;
  s.values = std::move(v);
  return s;
}

SequenceSpec SequenceSpec::scheme_heights(int from, int to) {
  SequenceSpec s;
  s.kind = Kind::SchemeHeights;
  s.from_stage = from;
  s.to_stage = to;
  return s;
}

SequenceSpec SequenceSpec::arithmetic(std::int64_t start, std::int64_t step, std::int64_t count) {
  SequenceSpec s;
  s.kind = Kind::Arithmetic;
  s.start = start;
  s.step = step;
  s.count = count;
  return s;
}

SequenceSpec SequenceSpec::random(std::uint64_t seed, std::int64_t count, std::int64_t max_value) {
  SequenceSpec s;
  s.kind = Kind::Random;
  s.seed = seed;
  s.count = count;
  s.max_value = max_value;
  return s;
}

namespace {

std::vector<std::int64_t> draw_distinct(std::mt19937_64& gen, std::int64_t count, std::int64_t max_value) {
  if (count < 0 || max_value < 1 || count > max_value) {
    throw ValidationError("cannot draw " + std::to_string(count) + " distinct integers from [1, " +
                          std::to_string(max_value) + "]");
  }
  std::vector<std::int64_t> out;
  std::set<std::int64_t> seen;
  while (static_cast<std::int64_t>(out.size()) < count) {
    auto v = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(max_value)) + 1;
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> seeded_distinct(std::uint64_t seed, std::int64_t count, std::int64_t max_value) {
  std::mt19937_64 gen(seed);
  return draw_distinct(gen, count, max_value);
}

std::vector<std::int64_t> SequenceSpec::materialize(const Tower* tower) const {
  std::vector<std::int64_t> out;
  switch (kind) {
    case Kind::Explicit:
      out = values;
      break;
    case Kind::SchemeHeights:
      if (!tower) throw ValidationError("scheme heights need a scheme");
      if (from_stage < 1 || to_stage < from_stage) throw ValidationError("bad stage range for heights");
      for (int n = from_stage; n <= to_stage; ++n) out.push_back(tower->height(n));
      break;
    case Kind::Arithmetic:
      if (count < 0) throw ValidationError("negative sequence length");
      for (std::int64_t i = 0; i < count; ++i) out.push_back(start + i * step);
      break;
    case Kind::Random:
      out = seeded_distinct(seed, count, max_value);
      break;
  }
  std::set<std::int64_t> seen(out.begin(), out.end());
  if (seen.size() != out.size()) throw ValidationError("sequence entries must be distinct");
  return out;
}

std::string SequenceSpec::describe() const {
  switch (kind) {
    case Kind::Explicit: return "explicit(" + std::to_string(values.size()) + ")";
    case Kind::SchemeHeights:
      return "heights(" + std::to_string(from_stage) + ".." + std::to_string(to_stage) + ")";
    case Kind::Arithmetic:
      return "arithmetic(" + std::to_string(start) + "," + std::to_string(step) + "," + std::to_string(count) + ")";
    case Kind::Random:
      return "random(seed=" + std::to_string(seed) + ",count=" + std::to_string(count) +
             ",max=" + std::to_string(max_value) + ")";
  }
  return "";
}

std::vector<CoverageRow> sweep_probe(const Engine& engine, const IntervalSet& a,
                                     const std::vector<std::int64_t>& seq, const Scalar& eps) {
  Scalar ma = measure(a);
  if (ma <= 0) throw ValidationError("A must have positive measure");
  if (eps <= 0) throw ValidationError("epsilon must be positive");
  std::vector<CoverageRow> rows;
  if (seq.empty()) return rows;
  Scalar e = eps / Scalar(static_cast<long>(seq.size()));
  IntervalSet covered;
  Scalar pending = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (a == IntervalSet::full()) {
      covered = a;
    } else {
      auto img = engine.forward_image(a, seq[i], e);
      covered = unite(covered, img.resolved);
      pending += img.unresolved_mass;
    }
    rows.push_back({static_cast<std::int64_t>(i + 1), seq[i],
                    coverage(measure(covered), pending, ma, static_cast<std::int64_t>(i + 1))});
  }
  return rows;
}

std::vector<CoverageRow> sweep_probe(const Engine& sx, const Engine& ty, const RectSet& a,
                                     const std::vector<std::int64_t>& seq, const Scalar& eps) {
  Scalar ma = measure(a);
  if (ma <= 0) throw ValidationError("A must have positive measure");
  if (eps <= 0) throw ValidationError("epsilon must be positive");
  std::vector<CoverageRow> rows;
  if (seq.empty()) return rows;
  Scalar e = eps / Scalar(2 * static_cast<long>(seq.size() * a.rects().size()));
  RectSet covered;
  Scalar pending = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::vector<Rect> parts;
    for (const auto& r : a.rects()) {
      auto ix = sx.forward_image(r.x, seq[i], e);
      auto iy = ty.forward_image(r.y, seq[i], e);
      parts.push_back({ix.resolved, iy.resolved});
      pending += measure(r.x) * measure(r.y) - measure(ix.resolved) * measure(iy.resolved);
    }
    // Images of disjoint rectangles are disjoint.
    covered = unite(covered, RectSet::from_rects(std::move(parts)));
    rows.push_back({static_cast<std::int64_t>(i + 1), seq[i],
                    coverage(measure(covered), pending, ma, static_cast<std::int64_t>(i + 1))});
  }
  return rows;
}

UsoResult uso_probe(const Engine& engine, const IntervalSet& a, int n, int trials, std::uint64_t seed,
                    const Scalar& eps, std::int64_t max_value) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (n < 1) throw ValidationError("tuple size must be >= 1");
  UsoResult res;
  res.seed = seed;
  res.n = n;
  res.trials = trials;
  res.max_value = max_value;
  std::mt19937_64 gen(seed);
  for (int t = 0; t < trials; ++t) {
    auto tuple = draw_distinct(gen, n, max_value);
    auto rows = sweep_probe(engine, a, tuple, eps);
    const auto& c = rows.back().coverage;
    if (t == 0 || c.lo < res.worst.lo) {
      res.worst = c;
      res.worst_tuple = tuple;
    }
  }
  return res;
}

ResidualWitness residual_witness(const RectSet& a, const IntervalSet& e, std::int64_t n) {
  if (measure(e) <= 0) throw ValidationError("E must have positive measure");
  if (n < 1) throw ValidationError("n must be >= 1");
  ResidualWitness w;
  w.a_prime = unite(a, RectSet::product(e, IntervalSet::full()));
  Scalar d = measure(symmetric_difference(a, w.a_prime));
  Scalar bound = measure(e) / Scalar(n);
  w.member = d < bound;
  w.deficit = bound - d;
  return w;
}

IntervalSet fiber_heavy_base(const RectSet& a, const IntervalSet& e, const Scalar& eps) {
  Scalar threshold = 1 - eps;
  std::vector<IntervalSet> heavy;
  std::vector<IntervalSet> columns;
  // In canonical form the x-parts are disjoint and the fiber over each is its y-part.
  for (const auto& r : a.rects()) {
    columns.push_back(r.x);
    if (measure(r.y) > threshold) heavy.push_back(r.x);
  }
  if (Scalar(0) > threshold) heavy.push_back(complement(unite_all(columns)));
  return intersect(e, unite_all(heavy));
}

}  // namespace rankone
