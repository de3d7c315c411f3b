#include "rankone/constructions.hpp"

#include <algorithm>
#include <map>

#include "rankone/errors.hpp"

namespace rankone {

namespace {

// Tᵏ(A) for a set whose orbit is fully determined by the stage cap.
IntervalSet exact_image(const Engine& engine, const IntervalSet& a, std::int64_t k, const char* what) {
  auto img = engine.image_to_stage(a, k, engine.stage_cap());
  if (img.unresolved_mass != 0) {
    throw ResourceError(std::string(what) + ": image under T^" + std::to_string(k) +
                            " not determined within the stage cap",
                        img.unresolved_mass);
  }
  return img.resolved;
}

Json pattern_name(PatternPiece p) {
  switch (p) {
    case PatternPiece::Empty: return "empty";
    case PatternPiece::C: return "C";
    case PatternPiece::D: return "D";
    case PatternPiece::Both: return "C+D";
  }
  return "empty";
}

}  // namespace

DenseFamilyElement thm1_dense_family(const Engine& engine, std::int64_t h) {
  if (h < 1) throw ValidationError("h must be >= 1");
  auto rt = engine.rohlin_tower(h, Scalar(1, static_cast<unsigned long>(h)));
  DenseFamilyElement f;
  f.h = h;
  f.stage = rt.stage;
  f.base = rt.base;
  f.error = rt.error;
  f.abar = leftmost_slice(rt.base, measure(rt.base) / Scalar(h));
  std::vector<IntervalSet> parts;
  parts.push_back(f.abar);
  for (std::int64_t i = 1; i < h; ++i) parts.push_back(exact_image(engine, f.abar, i, "thm1"));
  f.column = unite_all(parts);
  f.dense = unite(unite(f.base, f.error), f.column);
  return f;
}

Lemma1Report lemma1_check(const Engine& engine, const IntervalSet& abar, std::int64_t h,
                          const IntervalSet& b, std::int64_t n_from, std::int64_t n_to,
                          const Scalar& eps, const std::optional<IntervalSet>& a) {
  if (h < 1) throw ValidationError("h must be >= 1");
  if (eps <= 0) throw ValidationError("eps must be positive");
  Lemma1Report r;
  r.abar_measure = measure(abar);

  // TⁱĀ pairwise disjoint: their measures add up to the measure of the union.
  std::vector<IntervalSet> translates;
  bool determined = true;
  Scalar total = 0;
  for (std::int64_t i = 0; i < h; ++i) {
    auto img = engine.image_to_stage(abar, i, engine.stage_cap());
    if (img.unresolved_mass != 0) determined = false;
    total += measure(img.resolved);
    translates.push_back(img.resolved);
  }
  IntervalSet column = unite_all(translates);
  bool overlap = measure(column) < total;
  r.translates_disjoint = determined && !overlap;
  if (overlap) {
    r.failure = "translates T^i(Abar), 0 <= i < h, overlap";
  } else if (!determined) {
    r.failure = "translates of Abar not determined within the stage cap";
  }
  const IntervalSet& big_a = a ? *a : column;
  r.translates_inside = determined && is_subset(column, big_a);
  if (r.failure.empty() && !r.translates_inside) r.failure = "translates of Abar not contained in A";

  // μ(⋃_{i<h} T⁻ⁱB), each preimage to within eps/h.
  Scalar eps_i = eps / Scalar(h);
  std::vector<IntervalSet> pre;
  Scalar pending = 0;
  for (std::int64_t i = 0; i < h; ++i) {
    auto img = engine.forward_image(b, -i, eps_i);
    pre.push_back(img.resolved);
    pending += img.unresolved_mass;
  }
  Scalar covered = measure(unite_all(pre));
  r.coverage = {covered, std::min(Scalar(1), Scalar(covered + pending))};
  r.coverage_ok = r.coverage.lo >= 1 - eps;
  if (r.failure.empty() && !r.coverage_ok) r.failure = "preimages T^-i(B), 0 <= i < h, do not cover the space";

  bool first = true;
  for (std::int64_t n = n_from; n <= n_to; ++n) {
    // μ(A ∩ TⁿB) = μ(T⁻ⁿA ∩ B)
    Scalar e = eps;
    CertifiedValue c = engine.correlation(big_a, b, -n, e);
    for (int tries = 0; tries < 2 && c.lo < r.abar_measure && c.hi >= r.abar_measure; ++tries) {
      e /= 1000;
      c = engine.correlation(big_a, b, -n, e);
    }
    LemmaRow row{n, c, c.lo - r.abar_measure, c.hi - r.abar_measure};
    if (row.margin_hi < 0) r.refuted = true;
    if (first || row.margin_lo < r.min_margin_lo) r.min_margin_lo = row.margin_lo;
    first = false;
    r.rows.push_back(row);
  }
  return r;
}

PairFamily subtract_later_pairs(std::span<const MixingPair> raw) {
  PairFamily out;
  IntervalSet later;
  std::vector<MixingPair> rev;
  for (std::size_t i = raw.size(); i-- > 0;) {
    rev.push_back({subtract(raw[i].c, later), subtract(raw[i].d, later), raw[i].eps});
    later = unite(later, unite(raw[i].c, raw[i].d));
  }
  out.pairs.assign(rev.rbegin(), rev.rend());
  for (std::size_t i = 0; i < raw.size(); ++i) out.selected.push_back(i);
  return out;
}

PairFamily thm3_refine_pairs(std::span<const MixingPair> raw) {
  std::vector<Scalar> mass;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!disjoint(raw[i].c, raw[i].d)) throw ValidationError("pair " + std::to_string(i + 1) + " is not disjoint");
    if (raw[i].eps <= 0) throw ValidationError("pair " + std::to_string(i + 1) + " has non-positive epsilon");
    mass.push_back(measure(unite(raw[i].c, raw[i].d)));
  }
  // Greedy forward pass from each start; budget = min over chosen m of ε_m/4 − (mass chosen after m).
  std::vector<std::size_t> best;
  for (std::size_t s = 0; s < raw.size(); ++s) {
    std::vector<std::size_t> chosen{s};
    Scalar budget = raw[s].eps / 4;
    for (std::size_t j = s + 1; j < raw.size(); ++j) {
      if (mass[j] < budget) {
        chosen.push_back(j);
        budget = std::min(Scalar(budget - mass[j]), Scalar(raw[j].eps / 4));
      }
    }
    if (chosen.size() > best.size()) best = std::move(chosen);
  }
  if (best.size() < 2) {
    throw ValidationError("no subsequence of length >= 2 satisfies the tail-mass inequality");
  }
  std::vector<MixingPair> picked;
  for (auto i : best) picked.push_back(raw[i]);
  PairFamily out = subtract_later_pairs(picked);
  out.selected = best;
  return out;
}

PatternPiece base4_pattern(int i, std::int64_t m) {
  for (int d = 1; d < i; ++d) m /= 4;
  return static_cast<PatternPiece>(m % 4);
}

AlgebraTruncation thm3_algebra_generators(const PairFamily& family, int depth, int range) {
  if (depth < 1 || range < 1) throw ValidationError("depth and range must be >= 1");
  if (family.pairs.size() < static_cast<std::size_t>(range)) {
    throw ValidationError("family has " + std::to_string(family.pairs.size()) + " pairs, fewer than range " +
                          std::to_string(range));
  }
  AlgebraTruncation t;
  t.depth = depth;
  t.range = range;
  for (int i = 1; i <= depth; ++i) {
    std::vector<PatternPiece> row;
    std::vector<IntervalSet> parts;
    for (int m = 1; m <= range; ++m) {
      auto p = base4_pattern(i, m);
      row.push_back(p);
      const auto& pair = family.pairs[m - 1];
      if (p == PatternPiece::C || p == PatternPiece::Both) parts.push_back(pair.c);
      if (p == PatternPiece::D || p == PatternPiece::Both) parts.push_back(pair.d);
    }
    t.pattern.push_back(std::move(row));
    t.generators.push_back(unite_all(parts));
  }
  return t;
}

FirstReturnDecomposition first_return_decomposition(const Engine& engine, const IntervalSet& e,
                                                    const IntervalSet& b, int stage_cap,
                                                    const Scalar& eps) {
  if (measure(b) <= 0) throw ValidationError("B must have positive measure");
  if (eps < 0) throw ValidationError("eps must be nonnegative");
  int cap = std::min(stage_cap, engine.stage_cap());
  auto mask = LevelMask::align(engine, b, cap);
  if (!mask) throw ValidationError("B is not a union of whole levels of any stage up to the cap");

  FirstReturnDecomposition out;
  std::map<std::int64_t, std::pair<std::vector<Interval>, std::vector<Interval>>> by_time;
  std::vector<Piece> pending = engine.decompose(e, mask->stage());
  int m = mask->stage();
  for (;;) {
    std::vector<Piece> left;
    Scalar left_mass = 0;
    for (const auto& p : pending) {
      std::optional<std::int64_t> hit;
      if (!p.in_pool()) hit = mask->next_member(m, p.level);
      if (hit) {
        auto& slot = by_time[*hit - p.level];
        slot.first.push_back(engine.absolute(p));
        slot.second.push_back(engine.absolute(Piece{m, *hit, p.lo, p.hi}));
      } else {
        left_mass += p.length();
        left.push_back(p);
      }
    }
    if (left_mass <= eps || left.empty() || m >= cap) {
      std::vector<Interval> ivs;
      for (const auto& p : left) ivs.push_back(engine.absolute(p));
      out.unresolved = IntervalSet::from_intervals(std::move(ivs));
      out.unresolved_mass = left_mass;
      if (left_mass > eps) {
        throw ResourceError("first-return decomposition did not reach the tolerance within the stage cap",
                            left_mass);
      }
      break;
    }
    pending.clear();
    for (const auto& p : left) engine.refine(p, pending);
    ++m;
  }
  for (auto& [t, ivs] : by_time) {
    out.pieces.push_back({t, IntervalSet::from_intervals(std::move(ivs.first)),
                          IntervalSet::from_intervals(std::move(ivs.second))});
  }
  return out;
}

MildMixingPair thm4_mm_pair(const Engine& engine, std::int64_t h, const Scalar& eps) {
  if (h < 1) throw ValidationError("h must be >= 1");
  const std::int64_t th = h + 1;
  std::optional<RohlinTower> rt;
  for (int n = 1; n <= engine.stage_cap() && !rt; ++n) {
    const auto& tw = engine.tower();
    Scalar base = Scalar(tw.height(n) / th) * tw.width(n);
    if (base > 0 && engine.rohlin_error_measure(th, n) < base / Scalar(4 * th)) rt = engine.rohlin_tower_at(th, n);
  }
  if (!rt) throw ResourceError("no stage up to the cap gives a suitable height-" + std::to_string(th) + " tower");

  MildMixingPair p;
  p.h = h;
  p.stage = rt->stage;
  p.base = rt->base;
  p.error = rt->error;
  p.unresolved = 0;
  std::vector<IntervalSet> parts;
  IntervalSet seed;
  if (measure(rt->error) > 0) {
    auto fr = first_return_decomposition(engine, rt->error, rt->base, engine.stage_cap(), eps);
    p.unresolved = fr.unresolved_mass;
    std::vector<IntervalSet> landings;
    for (const auto& piece : fr.pieces) landings.push_back(piece.landing);
    seed = unite_all(landings);
    // Orbits leaving E stay in E until they enter B.
    parts.push_back(rt->error);
  } else {
    p.slice_branch = true;
    seed = leftmost_slice(rt->base, measure(rt->base) / Scalar(8 * th));
  }
  parts.push_back(seed);
  for (std::int64_t t = 1; t <= h; ++t) parts.push_back(exact_image(engine, seed, t, "thm4"));
  p.c = unite_all(parts);
  p.d = unite(subtract(rt->base, p.c), subtract(rt->floors.back(), p.c));
  return p;
}

std::vector<std::int64_t> thm5_indices(int i, std::int64_t max_index) {
  if (i < 1 || i > 60) throw ValidationError("generator index out of range");
  std::vector<std::int64_t> out;
  const std::int64_t block = std::int64_t{1} << i;
  for (std::int64_t m = 0;; ++m) {
    std::int64_t start = m * 2 * block;
    if (start + 1 > max_index) break;
    for (std::int64_t j = 1; j <= block && start + j <= max_index; ++j) out.push_back(start + j);
  }
  return out;
}

std::vector<SweepGenerator> thm5_generators(std::span<const IntervalSet> c_list, int k) {
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    for (std::size_t j = i + 1; j < c_list.size(); ++j) {
      if (!disjoint(c_list[i], c_list[j])) {
        throw ValidationError("C_" + std::to_string(i + 1) + " and C_" + std::to_string(j + 1) + " overlap");
      }
    }
  }
  std::vector<SweepGenerator> out;
  for (int i = 1; i <= k; ++i) {
    SweepGenerator g;
    g.i = i;
    g.indices = thm5_indices(i, static_cast<std::int64_t>(c_list.size()));
    std::vector<IntervalSet> parts;
    for (auto idx : g.indices) parts.push_back(c_list[idx - 1]);
    g.set = unite_all(parts);
    out.push_back(std::move(g));
  }
  return out;
}

Obstruction thm6_obstruction(const Engine& engine, int n_max, const IntervalSet& a, const Scalar& eps) {
  if (eps <= 0) throw ValidationError("eps must be positive");
  if (n_max < 0) throw ValidationError("N must be >= 0");
  Obstruction o;
  o.n_max = n_max;
  o.a = a;
  o.feasible = measure(a) < Scalar(1, static_cast<unsigned long>(2 * (n_max + 1)));
  std::vector<IntervalSet> pre{a};
  o.unresolved_mass = 0;
  for (int i = 1; i <= n_max; ++i) {
    auto img = engine.forward_image(a, -i, eps);
    pre.push_back(img.resolved);
    o.unresolved_mass += img.unresolved_mass;
  }
  o.outer = complement(unite_all(pre));
  Scalar m = measure(o.outer);
  o.measure = {std::max(Scalar(0), Scalar(m - o.unresolved_mass)), m};
  return o;
}

Json to_json(const DenseFamilyElement& f) {
  Json j;
  j["kind"] = "thm1";
  j["h"] = f.h;
  j["stage"] = f.stage;
  j["B"] = interval_set_to_json(f.base);
  j["E"] = interval_set_to_json(f.error);
  j["Abar"] = interval_set_to_json(f.abar);
  j["A"] = interval_set_to_json(f.column);
  j["D"] = interval_set_to_json(f.dense);
  j["measures"] = {{"B", scalar_to_json(measure(f.base))},
                   {"E", scalar_to_json(measure(f.error))},
                   {"Abar", scalar_to_json(measure(f.abar))},
                   {"A", scalar_to_json(measure(f.column))},
                   {"D", scalar_to_json(measure(f.dense))}};
  return j;
}

Json to_json(const Lemma1Report& r) {
  Json j;
  j["translates_disjoint"] = r.translates_disjoint;
  j["translates_inside"] = r.translates_inside;
  j["coverage"] = certified_to_json(r.coverage);
  j["coverage_ok"] = r.coverage_ok;
  j["failure"] = r.failure;
  j["Abar_measure"] = scalar_to_json(r.abar_measure);
  j["min_margin_lo"] = scalar_to_json(r.min_margin_lo);
  j["refuted"] = r.refuted;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"correlation", certified_to_json(row.correlation)},
                    {"margin", {{"lo", scalar_to_json(row.margin_lo)}, {"hi", scalar_to_json(row.margin_hi)}}}});
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const PairFamily& f) {
  Json j;
  j["kind"] = "thm3-pairs";
  j["selected"] = f.selected;
  Json pairs = Json::array();
  for (const auto& p : f.pairs) {
    pairs.push_back({{"C", interval_set_to_json(p.c)}, {"D", interval_set_to_json(p.d)}, {"eps", scalar_to_json(p.eps)}});
  }
  j["pairs"] = std::move(pairs);
  return j;
}

Json to_json(const AlgebraTruncation& t) {
  Json j;
  j["kind"] = "thm3-algebra";
  j["depth"] = t.depth;
  j["range"] = t.range;
  Json gens = Json::array();
  for (int i = 1; i <= t.depth; ++i) {
    Json pattern = Json::array();
    for (int m = 1; m <= t.range; ++m) pattern.push_back(pattern_name(t.at(i, m)));
    gens.push_back({{"i", i}, {"F", interval_set_to_json(t.generators[i - 1])}, {"pattern", std::move(pattern)}});
  }
  j["generators"] = std::move(gens);
  return j;
}

Json to_json(const MildMixingPair& p) {
  Json j;
  j["kind"] = "thm4";
  j["h"] = p.h;
  j["stage"] = p.stage;
  j["branch"] = p.slice_branch ? "slice" : "first-return";
  j["B"] = interval_set_to_json(p.base);
  j["E"] = interval_set_to_json(p.error);
  j["C"] = interval_set_to_json(p.c);
  j["D"] = interval_set_to_json(p.d);
  j["unresolved"] = scalar_to_json(p.unresolved);
  j["measures"] = {{"B", scalar_to_json(measure(p.base))},
                   {"E", scalar_to_json(measure(p.error))},
                   {"C", scalar_to_json(measure(p.c))},
                   {"D", scalar_to_json(measure(p.d))}};
  return j;
}

Json to_json(const std::vector<SweepGenerator>& gens) {
  Json j;
  j["kind"] = "thm5";
  Json arr = Json::array();
  for (const auto& g : gens) arr.push_back({{"i", g.i}, {"indices", g.indices}, {"F", interval_set_to_json(g.set)}});
  j["generators"] = std::move(arr);
  return j;
}

Json to_json(const Obstruction& o) {
  Json j;
  j["kind"] = "thm6";
  j["N"] = o.n_max;
  j["A"] = interval_set_to_json(o.a);
  j["feasible"] = o.feasible;
  j["B_outer"] = interval_set_to_json(o.outer);
  j["unresolved"] = scalar_to_json(o.unresolved_mass);
  j["B_measure"] = certified_to_json(o.measure);
  return j;
}

}  // namespace rankone
