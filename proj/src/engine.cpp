#include "rankone/engine.hpp"

#include <algorithm>

#include "rankone/errors.hpp"

namespace rankone {

Scalar default_epsilon() { return make_scalar(1, 1'000'000); }

Engine::Engine(SchemeSpec spec, int stage_cap)
    : tower_(std::make_shared<Tower>(std::move(spec), stage_cap)) {}

std::vector<Piece> Engine::decompose(const IntervalSet& a, int stage) const {
  std::vector<Piece> pieces;
  const Scalar& w1 = tower_->width(1);
  for (const auto& iv : a.intervals()) {
    if (iv.lo < w1) pieces.push_back({1, 0, iv.lo, iv.hi < w1 ? iv.hi : w1});
    if (iv.hi > w1) pieces.push_back({1, -1, iv.lo > w1 ? iv.lo : w1, iv.hi});
  }
  for (int n = 1; n < stage; ++n) {
    std::vector<Piece> next;
    for (const auto& p : pieces) refine(p, next);
    pieces = std::move(next);
  }
  return pieces;
}

void Engine::refine(const Piece& p, std::vector<Piece>& out) const {
  const int n = p.stage;
  const Scalar& w = tower_->width(n + 1);
  if (!p.in_pool()) {
    std::int64_t first = floor_to_int(p.lo / w);
    for (std::int64_t j = first;; ++j) {
      Scalar cell_lo = j * w;
      if (cell_lo >= p.hi) break;
      Scalar cell_hi = cell_lo + w;
      Scalar lo = p.lo > cell_lo ? p.lo : cell_lo;
      Scalar hi = p.hi < cell_hi ? p.hi : cell_hi;
      if (lo < hi) {
        out.push_back({n + 1, tower_->copy_level(n + 1, static_cast<int>(j), p.level), lo - cell_lo,
                       hi - cell_lo});
      }
    }
    return;
  }
  const Scalar& pool_lo = tower_->pool_left(n);
  const Scalar& next_pool_lo = tower_->pool_left(n + 1);
  if (p.lo < next_pool_lo) {
    std::int64_t total = tower_->spacer_total(n + 1);
    for (std::int64_t s = floor_to_int((p.lo - pool_lo) / w); s < total; ++s) {
      Scalar cell_lo = pool_lo + s * w;
      if (cell_lo >= p.hi) break;
      Scalar cell_hi = cell_lo + w;
      Scalar lo = p.lo > cell_lo ? p.lo : cell_lo;
      Scalar hi = p.hi < cell_hi ? p.hi : cell_hi;
      if (lo < hi) out.push_back({n + 1, tower_->spacer_level(n + 1, s), lo - cell_lo, hi - cell_lo});
    }
  }
  if (p.hi > next_pool_lo) {
    out.push_back({n + 1, -1, p.lo > next_pool_lo ? p.lo : next_pool_lo, p.hi});
  }
}

Interval Engine::absolute(const Piece& p) const {
  if (p.in_pool()) return {p.lo, p.hi};
  Scalar left = tower_->level_left(p.stage, p.level);
  return {left + p.lo, left + p.hi};
}

template <class Stop>
PartialImage Engine::walk(const IntervalSet& a, std::int64_t k, int max_stage, Stop stop) const {
  PartialImage out;
  if (k == 0 || a.empty()) {
    out.resolved = a;
    out.unresolved_mass = 0;
    return out;
  }
  std::vector<Interval> images;
  std::vector<Piece> pending = decompose(a, 1);
  for (int n = 1;; ++n) {
    const std::int64_t h = tower_->height(n);
    std::vector<Piece> kept;
    Scalar kept_mass = 0;
    for (auto& p : pending) {
      bool resolvable = !p.in_pool() && (k > 0 ? p.level < h - k : p.level >= -k);
      if (resolvable) {
        Scalar left = tower_->level_left(n, p.level + k);
        images.push_back({left + p.lo, left + p.hi});
      } else {
        kept_mass += p.length();
        kept.push_back(std::move(p));
      }
    }
    if (kept.empty() || stop(kept_mass, n) || n >= max_stage) {
      out.resolved = IntervalSet::from_intervals(std::move(images));
      out.unresolved_mass = kept_mass;
      std::vector<Interval> src;
      src.reserve(kept.size());
      for (const auto& p : kept) src.push_back(absolute(p));
      out.source_unresolved = IntervalSet::from_intervals(std::move(src));
      out.stage_reached = n;
      return out;
    }
    pending.clear();
    for (const auto& p : kept) refine(p, pending);
  }
}

PartialImage Engine::forward_image(const IntervalSet& a, std::int64_t k, const Scalar& eps) const {
  if (eps <= 0) throw ValidationError("epsilon must be positive");
  PartialImage img = walk(a, k, stage_cap(), [&](const Scalar& mass, int) { return mass <= eps; });
  if (img.unresolved_mass > eps) {
    throw ResourceError("unresolved mass " + to_string(img.unresolved_mass) + " still above epsilon " +
                            to_string(eps) + " at the stage cap " + std::to_string(stage_cap()),
                        img.unresolved_mass);
  }
  return img;
}

PartialImage Engine::image_to_stage(const IntervalSet& a, std::int64_t k, int max_stage) const {
  if (max_stage < 1) throw ValidationError("stage index must be >= 1");
  return walk(a, k, max_stage, [](const Scalar&, int) { return false; });
}

CertifiedValue Engine::correlation(const IntervalSet& a, const IntervalSet& b, std::int64_t k,
                                   const Scalar& eps) const {
  if (eps <= 0) throw ValidationError("epsilon must be positive");
  if (a.empty() || b.empty()) return CertifiedValue::exact(0);
  if (k == 0) return CertifiedValue::exact(intersection_measure(a, b));
  // T preserves μ and maps [0,1) onto itself.
  if (b == IntervalSet::full()) return CertifiedValue::exact(measure(a));
  if (a == IntervalSet::full()) return CertifiedValue::exact(measure(b));
  if (auto v = exact_correlation(a, b, k)) return CertifiedValue::exact(*v);
  PartialImage img = forward_image(a, k, eps);
  Scalar lo = intersection_measure(img.resolved, b);
  return {lo, lo + img.unresolved_mass};
}

bool Engine::aligned_at(const IntervalSet& a, int n) const {
  const Scalar& p = tower_->pool_left(n);
  IntervalSet in_pool = intersect(a, IntervalSet(p, Scalar(1)));
  if (!in_pool.empty() && measure(in_pool) != 1 - p) return false;
  IntervalSet in_levels = intersect(a, IntervalSet(Scalar(0), p));
  for (const auto& iv : in_levels.intervals()) {
    if (tower_->locate(iv.lo, n).offset != 0) return false;
    if (iv.hi != p && tower_->locate(iv.hi, n).offset != 0) return false;
  }
  return true;
}

namespace {

// 1 if iv ⊆ s, 0 if disjoint, -1 otherwise.
int membership(const IntervalSet& s, const Interval& iv) {
  const auto& ivs = s.intervals();
  auto it = std::upper_bound(ivs.begin(), ivs.end(), iv.lo, [](const Scalar& x, const Interval& j) { return x < j.hi; });
  if (it == ivs.end() || it->lo >= iv.hi) return 0;
  return (it->lo <= iv.lo && iv.hi <= it->hi) ? 1 : -1;
}

}  // namespace

// Let R_m be the walk's resolved part at stage m: pieces whose level ℓ has
// ℓ+k inside stage m. Each copy of a stage-m level in stage m+1 contributes
// its share of R_m again, so R_{m+1} = R_m + w_{m+1}·X_m where X_m counts the
// matches across copy boundaries and spacers. If the bottom and top |k|
// levels and the pool lie wholly inside or outside A and B, X_m depends only
// on those bits and the rule; once the bits repeat, X_m is constant and the
// remaining gains form a geometric series.
std::optional<Scalar> Engine::exact_correlation(const IntervalSet& a, const IntervalSet& b, std::int64_t k) const {
  const auto& spec = tower_->spec();
  const StageRule& tail = spec.tail;
  const std::int64_t span = k < 0 ? -k : k;
  const bool top_moves = tail.spacers.back() > 0;
  int first = static_cast<int>(spec.prefix.size()) + 1;
  try {
    for (int m = std::max(first, 1); m + 1 <= stage_cap(); ++m) {
      std::int64_t h = tower_->height(m);
      if (h < span) continue;
      Interval pool{tower_->pool_left(m), Scalar(1)};
      int pa = pool.lo < 1 ? membership(a, pool) : 0, pb = pool.lo < 1 ? membership(b, pool) : 0;
      if (pa < 0 || pb < 0) continue;
      bool steady = true;
      for (std::int64_t i = 0; i < span && steady; ++i) {
        Interval lo = tower_->level_interval(m, i), hi = tower_->level_interval(m, h - 1 - i);
        int al = membership(a, lo), bl = membership(b, lo), ah = membership(a, hi), bh = membership(b, hi);
        steady = al >= 0 && bl >= 0 && ah >= 0 && bh >= 0;
        // The top window of stage m+1 is this one shifted by the trailing
        // spacers, so it repeats only when it already matches the pool.
        if (top_moves) steady = steady && ah == pa && bh == pb;
      }
      if (!steady) continue;
      Scalar r0 = intersection_measure(image_to_stage(a, k, m).resolved, b);
      Scalar r1 = intersection_measure(image_to_stage(a, k, m + 1).resolved, b);
      return r1 + (r1 - r0) / Scalar(tail.cuts - 1);
    }
  } catch (const ResourceError&) {
  }
  return std::nullopt;
}

std::optional<Scalar> Engine::orbit_point(const Scalar& x, std::int64_t k, int stage_cap) const {
  if (x < 0 || x >= 1) throw ValidationError("point " + to_string(x) + " outside [0,1)");
  if (k == 0) return x;
  for (int n = 1; n <= stage_cap; ++n) {
    Tower::Location loc = tower_->locate(x, n);
    if (loc.level < 0) continue;
    std::int64_t target = loc.level + k;
    if (target >= 0 && target < tower_->height(n)) return tower_->level_left(n, target) + loc.offset;
  }
  return std::nullopt;
}

Scalar Engine::rohlin_error_measure(std::int64_t h, int stage) const {
  return (tower_->height(stage) % h) * tower_->width(stage) + tower_->pool_measure(stage);
}

RohlinTower Engine::rohlin_tower_at(std::int64_t h, int stage) const {
  if (h < 1) throw ValidationError("tower height must be >= 1");
  RohlinTower rt;
  rt.height = h;
  rt.stage = stage;
  std::int64_t blocks = tower_->height(stage) / h;
  std::vector<std::vector<Interval>> floors(static_cast<std::size_t>(h));
  for (std::int64_t i = 0; i < blocks; ++i) {
    rt.base_levels.push_back(i * h);
    for (std::int64_t j = 0; j < h; ++j) floors[j].push_back(tower_->level_interval(stage, i * h + j));
  }
  std::vector<Interval> covered;
  for (auto& f : floors) {
    covered.insert(covered.end(), f.begin(), f.end());
    rt.floors.push_back(IntervalSet::from_intervals(std::move(f)));
  }
  rt.base = rt.floors.front();
  rt.error = complement(IntervalSet::from_intervals(std::move(covered)));
  return rt;
}

RohlinTower Engine::rohlin_tower(std::int64_t h, const Scalar& delta) const {
  if (h < 1) throw ValidationError("tower height must be >= 1");
  if (delta <= 0) throw ValidationError("delta must be positive");
  for (int n = 1; n <= stage_cap(); ++n) {
    if (rohlin_error_measure(h, n) < delta) return rohlin_tower_at(h, n);
  }
  throw ResourceError("no stage up to the cap gives a height-" + std::to_string(h) +
                      " tower with error below " + to_string(delta));
}

IntervalSet Engine::evaluate(const SetExpr& e) const {
  using K = SetExpr::Kind;
  switch (e.kind) {
    case K::Interval:
      if (e.lo > e.hi) throw ValidationError("interval(" + to_string(e.lo) + "," + to_string(e.hi) + ") is reversed");
      return IntervalSet(e.lo, e.hi);
    case K::Levels: {
      std::vector<Interval> ivs;
      for (auto i : e.indices) {
        if (i < 0 || i >= tower_->height(e.stage)) {
          throw ValidationError("level " + std::to_string(i) + " outside stage " + std::to_string(e.stage) +
                                " (height " + std::to_string(tower_->height(e.stage)) + ")");
        }
        ivs.push_back(tower_->level_interval(e.stage, i));
      }
      return IntervalSet::from_intervals(std::move(ivs));
    }
    case K::Base:
      return IntervalSet::from_intervals({tower_->level_interval(e.stage, 0)});
    case K::Pool:
      return IntervalSet(tower_->pool_left(e.stage), Scalar(1));
    case K::Union:
      return unite(evaluate(e.children[0]), evaluate(e.children[1]));
    case K::Intersect:
      return intersect(evaluate(e.children[0]), evaluate(e.children[1]));
    case K::Difference:
      return subtract(evaluate(e.children[0]), evaluate(e.children[1]));
    case K::Complement:
      return complement(evaluate(e.children[0]));
  }
  return {};
}

std::optional<LevelMask> LevelMask::align(const Engine& engine, const IntervalSet& b, int max_stage) {
  std::vector<Piece> pieces = engine.decompose(b, 1);
  for (int n = 1; n <= max_stage; ++n) {
    if (n > 1) {
      std::vector<Piece> next;
      for (const auto& p : pieces) engine.refine(p, next);
      pieces = std::move(next);
    }
    const Scalar& w = engine.tower().width(n);
    bool aligned = std::all_of(pieces.begin(), pieces.end(), [&](const Piece& p) {
      return !p.in_pool() && p.lo == 0 && p.hi == w;
    });
    if (aligned) {
      std::vector<std::int64_t> levels;
      for (const auto& p : pieces) levels.push_back(p.level);
      std::sort(levels.begin(), levels.end());
      return LevelMask(engine.tower(), n, std::move(levels));
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> LevelMask::first_member(int m) const {
  auto it = first_.find(m);
  if (it != first_.end()) return it->second;
  auto v = next_member(m, 0);
  first_.emplace(m, v);
  return v;
}

std::optional<std::int64_t> LevelMask::next_member(int m, std::int64_t level) const {
  if (m == stage_) {
    auto it = std::lower_bound(members_.begin(), members_.end(), level);
    if (it == members_.end()) return std::nullopt;
    return *it;
  }
  if (level == 0) {
    auto it = first_.find(m);
    if (it != first_.end()) return it->second;
  }
  Tower::Origin o = tower_->origin(m, level);
  std::optional<std::int64_t> found;
  if (!o.spacer) {
    if (auto r = next_member(m - 1, o.parent_level)) found = tower_->copy_level(m, o.copy, *r);
  }
  // Spacers descend from the pool, never from member levels.
  if (!found && o.copy + 1 < tower_->cuts_into(m)) {
    if (auto f = first_member(m - 1)) found = tower_->copy_level(m, o.copy + 1, *f);
  }
  if (level == 0) first_.emplace(m, found);
  return found;
}

std::vector<std::size_t> GridOracle::cells_within(const IntervalSet& s) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (is_subset(IntervalSet(cells[c].lo, cells[c].hi), s)) out.push_back(c);
  }
  return out;
}

CertifiedValue GridOracle::correlation(const IntervalSet& a, const IntervalSet& b, std::int64_t k) const {
  auto a_cells = cells_within(a);
  Scalar covered = 0;
  for (auto c : a_cells) covered += cells[c].length();
  if (covered != measure(a)) throw ValidationError("set is not aligned with the oracle's cells");
  Scalar lo = 0, unknown = 0;
  for (auto c : a_cells) {
    std::optional<std::size_t> cur = c;
    for (std::int64_t step = 0; cur && step < (k >= 0 ? k : -k); ++step) {
      cur = k >= 0 ? next[*cur] : prev[*cur];
    }
    if (!cur) {
      unknown += cells[c].length();
    } else if (is_subset(IntervalSet(cells[*cur].lo, cells[*cur].hi), b)) {
      lo += cells[*cur].length();
    }
  }
  return {lo, lo + unknown};
}

GridOracle grid_oracle(const Engine& engine, int n) {
  Stage st = build_stage(engine.spec(), n);
  GridOracle g;
  g.stage = n;
  g.width = st.width;
  g.cells = st.levels;
  if (!st.pool.empty()) {
    Scalar lo = st.pool.intervals().front().lo;
    while (lo < 1) {
      Scalar hi = lo + st.width;
      if (hi > 1) hi = 1;
      g.cells.push_back({lo, hi});
      lo = hi;
    }
  }
  std::vector<std::size_t> order(g.cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return g.cells[x].lo < g.cells[y].lo; });
  auto cell_of = [&](const Scalar& y) -> std::size_t {
    auto it = std::upper_bound(order.begin(), order.end(), y,
                               [&](const Scalar& v, std::size_t c) { return v < g.cells[c].lo; });
    return *(it - 1);
  };

  g.next.assign(g.cells.size(), std::nullopt);
  g.prev.assign(g.cells.size(), std::nullopt);
  for (std::int64_t i = 0; i + 1 < st.height; ++i) {
    const Interval& cell = g.cells[static_cast<std::size_t>(i)];
    Scalar mid = (cell.lo + cell.hi) / 2;
    auto y = engine.orbit_point(mid, 1, n);
    if (!y) continue;
    std::size_t target = cell_of(*y);
    if (g.prev[target]) throw std::logic_error("grid oracle table is not injective");
    g.next[static_cast<std::size_t>(i)] = target;
    g.prev[target] = static_cast<std::size_t>(i);
  }
  return g;
}

}  // namespace rankone
