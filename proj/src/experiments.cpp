#include "rankone/experiments.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rankone/constructions.hpp"
#include "rankone/errors.hpp"

namespace rankone {

namespace {

std::string join_rationals(const std::vector<Scalar>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out;
}

DemoCheck exact_check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok ? "exact-pass" : "exact-fail", std::move(detail)};
}

DemoCheck surrogate(std::string name, std::string detail) {
  return {std::move(name), "surrogate", std::move(detail)};
}

Json checks_to_json(const std::vector<DemoCheck>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
  return arr;
}

// Pairwise disjointness of a list of sets, exactly.
bool all_disjoint(const std::vector<IntervalSet>& sets) {
  Scalar total = 0;
  for (const auto& s : sets) total += measure(s);
  return measure(unite_all(sets)) == total;
}

}  // namespace

std::string status_of(const CertifiedValue& v) { return v.is_exact() ? "exact" : "enclosure"; }

std::string scheme_label(const SchemeSpec& spec) {
  if (spec.name) return *spec.name;
  std::string text = serialize_scheme(spec);
  while (!text.empty() && text.back() == '\n') text.pop_back();
  std::replace(text.begin(), text.end(), '\n', ';');
  return text;
}

ScanReport run_scan(const Engine& engine, const SetExpr& a, const SetExpr& b, std::int64_t n_from,
                    std::int64_t n_to, const Scalar& eps) {
  if (n_from > n_to) throw ValidationError("empty range: from " + std::to_string(n_from) + " > to " + std::to_string(n_to));
  if (eps <= 0) throw ValidationError("epsilon must be positive");
  ScanReport r;
  r.scheme = scheme_label(engine.spec());
  r.a_expr = to_string(a);
  r.b_expr = to_string(b);
  r.eps = eps;
  r.n_from = n_from;
  r.n_to = n_to;
  IntervalSet sa = engine.evaluate(a), sb = engine.evaluate(b);
  r.achieved_eps = 0;
  for (std::int64_t n = n_from; n <= n_to; ++n) {
    auto v = engine.correlation(sa, sb, n, eps);
    if (r.rows.empty() || v.lo < r.min_lo) r.min_lo = v.lo;
    if (r.rows.empty() || v.hi > r.max_hi) r.max_hi = v.hi;
    r.achieved_eps = std::max(r.achieved_eps, v.width());
    r.rows.push_back({n, v});
  }
  return r;
}

JoiningTarget parse_joining_target(const std::string& text) {
  JoiningTarget t;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = parse_rational(item);
    if (v < 0) throw ValidationError("joining coefficients must be nonnegative");
    t.a.push_back(v);
  }
  if (t.a.empty()) throw ValidationError("joining target needs at least one coefficient");
  return t;
}

JoiningReport run_joining_check(const Engine& engine, const SetExpr& a, const SetExpr& b,
                                const JoiningTarget& target, int stage_from, int stage_to, const Scalar& eps) {
  if (target.a.empty()) throw ValidationError("joining target needs at least one coefficient");
  if (stage_from < 1 || stage_from > stage_to) throw ValidationError("bad stage range");
  JoiningReport r;
  r.scheme = scheme_label(engine.spec());
  r.a_expr = to_string(a);
  r.b_expr = to_string(b);
  r.target = target;
  r.eps = eps;
  r.stage_from = stage_from;
  r.stage_to = stage_to;
  IntervalSet sa = engine.evaluate(a), sb = engine.evaluate(b);
  CertifiedValue rhs = CertifiedValue::exact(0);
  Scalar term_eps = eps / Scalar(static_cast<long>(target.a.size()));
  for (std::size_t i = 0; i < target.a.size(); ++i) {
    auto c = engine.correlation(sa, sb, -static_cast<std::int64_t>(i), term_eps);
    rhs = rhs + CertifiedValue{target.a[i] * c.lo, target.a[i] * c.hi};
  }
  for (int n = stage_from; n <= stage_to; ++n) {
    JoiningRow row;
    row.stage = n;
    row.k = engine.tower().height(n);
    row.lhs = engine.correlation(sa, sb, row.k, eps);
    row.rhs = rhs;
    row.gap_lo = std::max({Scalar(0), Scalar(row.lhs.lo - rhs.hi), Scalar(rhs.lo - row.lhs.hi)});
    row.gap_hi = std::max(Scalar(row.lhs.hi - rhs.lo), Scalar(rhs.hi - row.lhs.lo));
    r.rows.push_back(row);
  }
  return r;
}

LiminfReport liminf_horizon(const Engine& engine, const SetExpr& a, const SetExpr& b, std::int64_t n_from,
                            std::int64_t n_to, const Scalar& eps) {
  LiminfReport r;
  r.scan = run_scan(engine, a, b, n_from, n_to, eps);
  r.min_lo = r.scan.min_lo;
  return r;
}

// ---------------------------------------------------------------------------
// Demos.

namespace {

Json params_json(const std::string& name, const DemoParams& p) {
  Json j;
  j["scheme"] = p.scheme;
  if (name == "thm1") {
    j["h"] = p.h;
    j["n_from"] = p.n_from;
    j["n_to"] = p.n_to;
  } else if (name == "thm3") {
    j["k"] = p.k;
    j["M"] = p.m;
    j["n_to"] = p.n_to;
  } else if (name == "thm4") {
    j["h"] = p.h;
    j["n_from"] = p.n_from;
    j["n_to"] = p.n_to;
  } else if (name == "thm5") {
    j["k"] = p.k;
    j["M"] = p.m;
  } else if (name == "thm6") {
    j["N"] = p.big_n;
    j["A"] = p.a_expr;
    j["stage_from"] = p.stage_from;
    j["stage_to"] = p.stage_to;
  } else if (name == "ex3-sweep") {
    j["length"] = p.length;
  } else if (name == "residual") {
    j["E"] = p.a_expr;
    j["n"] = p.h;
  }
  j["eps"] = scalar_to_json(p.eps);
  return j;
}

void demo_thm1(const Engine& e, const DemoParams& p, DemoResult& d) {
  auto f = thm1_dense_family(e, p.h);
  auto b = unite(f.base, f.error);
  auto rep = lemma1_check(e, f.abar, p.h, b, p.n_from, p.n_to, p.eps, f.column);
  d.checks.push_back(exact_check("E_h small", measure(f.error) < Scalar(1, static_cast<unsigned long>(p.h)),
                                 "mu(E)=" + to_string(measure(f.error))));
  d.checks.push_back(exact_check("Abar in B", is_subset(f.abar, f.base)));
  d.checks.push_back(exact_check("mu(Abar) = mu(B)/h", measure(f.abar) * p.h == measure(f.base),
                                 "mu(Abar)=" + to_string(measure(f.abar))));
  d.checks.push_back(exact_check("D = B u E u A", f.dense == unite(b, f.column)));
  d.checks.push_back(exact_check("translates disjoint", rep.translates_disjoint));
  d.checks.push_back(exact_check("preimages of B cover", rep.coverage_ok,
                                 "coverage=[" + to_string(rep.coverage.lo) + "," + to_string(rep.coverage.hi) + "]"));
  d.checks.push_back(exact_check("no negative upper margin", !rep.refuted));
  if (rep.min_margin_lo >= 0) {
    d.checks.push_back(exact_check("margins >= 0", true, "min lo margin=" + to_string(rep.min_margin_lo)));
  } else {
    d.checks.push_back({"margins >= 0", "undetermined", "min lo margin=" + to_string(rep.min_margin_lo)});
  }
  d.artifact = to_json(f);
  d.artifact["lemma"] = to_json(rep);
}

void demo_thm3(const Engine& e, const DemoParams& p, DemoResult& d) {
  std::vector<MixingPair> raw;
  Json eps_notes = Json::array();
  for (std::int64_t h : {4, 8, 16}) {
    auto pair = thm4_mm_pair(e, h, p.eps);
    // Finite-horizon stand-in for the liminf lower bound ε̂_h.
    Scalar low;
    bool first = true;
    for (std::int64_t n = 1; n <= p.n_to; ++n) {
      auto c = e.correlation(pair.c, pair.d, n, p.eps);
      if (first || c.lo < low) low = c.lo;
      first = false;
    }
    raw.push_back({pair.c, pair.d, low});
    eps_notes.push_back({{"h", h}, {"eps_hat", scalar_to_json(low)}});
  }
  PairFamily fam;
  std::string how = "refine";
  try {
    fam = thm3_refine_pairs(raw);
  } catch (const ValidationError&) {
    fam = subtract_later_pairs(raw);
    how = "subtract-only";
  }
  std::vector<IntervalSet> all;
  for (const auto& pr : fam.pairs) {
    all.push_back(pr.c);
    all.push_back(pr.d);
  }
  d.checks.push_back(exact_check("pairs pairwise disjoint", all_disjoint(all), how));
  int range = std::min<int>(p.m, static_cast<int>(fam.pairs.size()));
  auto t = thm3_algebra_generators(fam, p.k, range);
  bool consistent = true;
  for (int i = 1; i <= t.depth; ++i) {
    for (int m = 1; m <= t.range; ++m) {
      const auto& pr = fam.pairs[m - 1];
      auto got = intersect(t.generators[i - 1], unite(pr.c, pr.d));
      IntervalSet want;
      auto piece = t.at(i, m);
      if (piece == PatternPiece::C || piece == PatternPiece::Both) want = unite(want, pr.c);
      if (piece == PatternPiece::D || piece == PatternPiece::Both) want = unite(want, pr.d);
      consistent = consistent && got == want;
    }
  }
  d.checks.push_back(exact_check("patterns match generators", consistent));
  d.checks.push_back(surrogate("eps_hat from finite horizon", "minimum over n<=" + std::to_string(p.n_to)));
  d.artifact = to_json(fam);
  d.artifact["eps_hat"] = std::move(eps_notes);
  d.artifact["algebra"] = to_json(t);
}

void demo_thm4(const Engine& e, const DemoParams& p, DemoResult& d) {
  auto pr = thm4_mm_pair(e, p.h, p.eps);
  Scalar bound = make_scalar(2, p.h + 1);
  d.checks.push_back(exact_check("C and D disjoint", intersect(pr.c, pr.d).empty()));
  d.checks.push_back(exact_check("mu(C) < 2/(h+1)", measure(pr.c) < bound, "mu(C)=" + to_string(measure(pr.c))));
  d.checks.push_back(exact_check("mu(D) < 2/(h+1)", measure(pr.d) < bound, "mu(D)=" + to_string(measure(pr.d))));
  d.checks.push_back(exact_check("unresolved <= eps", pr.unresolved <= p.eps, "unresolved=" + to_string(pr.unresolved)));
  Scalar low;
  bool first = true;
  for (std::int64_t n = p.n_from; n <= p.n_to; ++n) {
    auto c = e.correlation(pr.c, pr.d, n, p.eps);
    if (first || c.lo < low) low = c.lo;
    first = false;
  }
  d.checks.push_back(surrogate("min correlation(C,D,n)", "n in [" + std::to_string(p.n_from) + "," +
                                                             std::to_string(p.n_to) + "]: lo=" + to_string(low)));
  d.artifact = to_json(pr);
  d.artifact["min_correlation_lo"] = scalar_to_json(low);
}

void demo_thm5(const DemoParams& p, DemoResult& d) {
  std::vector<IntervalSet> cs;
  for (int m = 0; m < p.m; ++m) cs.push_back(IntervalSet(make_scalar(m, p.m), make_scalar(m + 1, p.m)));
  auto gens = thm5_generators(cs, p.k);
  bool match = true;
  for (const auto& g : gens) {
    std::vector<std::int64_t> want;
    for (std::int64_t c = 1; c <= p.m; ++c) {
      if ((c - 1) % (std::int64_t{2} << g.i) < (std::int64_t{1} << g.i)) want.push_back(c);
    }
    match = match && want == g.indices;
  }
  d.checks.push_back(exact_check("index sets match enumeration", match));
  d.artifact = to_json(gens);
}

void demo_thm6(const Engine& e, const DemoParams& p, DemoResult& d) {
  auto a = e.evaluate(parse_set_expr(p.a_expr));
  auto o = thm6_obstruction(e, p.big_n, a, p.eps);
  Scalar gate(1, static_cast<unsigned long>(2 * (p.big_n + 1)));
  d.checks.push_back(exact_check("feasibility gate", o.feasible == (measure(a) < gate),
                                 std::string(o.feasible ? "feasible" : "infeasible") + ": mu(A)=" + to_string(measure(a))));
  d.checks.push_back(exact_check("B disjoint from A", disjoint(o.outer, a)));
  d.checks.push_back(exact_check("mu(B) >= 1 - (N+1)mu(A)", o.measure.hi >= 1 - (p.big_n + 1) * measure(a),
                                 "mu(B) in [" + to_string(o.measure.lo) + "," + to_string(o.measure.hi) + "]"));
  Json rows = Json::array();
  Scalar last_hi;
  for (int n = p.stage_from; n <= p.stage_to; ++n) {
    std::int64_t k = e.tower().height(n);
    // B ⊆ outer, so this bounds μ(TᵏA ∩ B) from above.
    auto c = e.correlation(a, o.outer, k, p.eps);
    last_hi = c.hi;
    rows.push_back({{"n", n}, {"k", k}, {"correlation", certified_to_json(c)}});
  }
  d.checks.push_back(surrogate("correlation along heights tends to 0", "last hi=" + to_string(last_hi)));
  d.artifact = to_json(o);
  d.artifact["heights"] = std::move(rows);
}

void demo_ex3(const DemoParams& p, DemoResult& d) {
  auto [s1, s2] = interleaved_pair({{2, 1}, {2, 1}});
  Engine x(s1, p.stage_cap), y(s2, p.stage_cap);
  bool rigid_ok = true;
  for (int n = 1; n <= 2; ++n) {
    const auto& t = x.tower();
    for (std::int64_t l = 0; l < t.height(n); ++l) {
      auto dv = rigid_displacement(x, n, l, p.eps);
      rigid_ok = rigid_ok && dv.hi <= Scalar(2, 3) * t.height(n) * t.width(n);
    }
  }
  d.checks.push_back(exact_check("rigid stages move level sets little", rigid_ok));
  auto a = RectSet::product(IntervalSet::from_intervals({x.tower().level_interval(2, 0)}), IntervalSet::full());
  auto seq = SequenceSpec::arithmetic(1, 1, p.length).materialize();
  auto rows = sweep_probe(x, y, a, seq, p.eps);
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].coverage.lo >= rows[i - 1].coverage.lo;
  d.checks.push_back(exact_check("coverage lo nondecreasing", monotone));
  d.checks.push_back(surrogate("product sweep coverage", "final lo=" + to_string(rows.back().coverage.lo)));
  Json j;
  j["kind"] = "ex3-sweep";
  j["scheme_x"] = scheme_label(s1);
  j["scheme_y"] = scheme_label(s2);
  j["A"] = rect_set_to_json(a);
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back({{"L", r.length}, {"k", r.k}, {"coverage", certified_to_json(r.coverage)}});
  j["rows"] = std::move(arr);
  d.artifact = std::move(j);
}

void demo_residual(const Engine& e, const DemoParams& p, DemoResult& d) {
  auto set_e = e.evaluate(parse_set_expr(p.a_expr));
  std::int64_t n = p.h;
  Scalar strip_height = Scalar(1, 2) / Scalar(n);
  auto a = subtract(RectSet::product(set_e, IntervalSet::full()), RectSet::product(set_e, IntervalSet(Scalar(0), strip_height)));
  auto w = residual_witness(a, set_e, n);
  Scalar d_sym = measure(symmetric_difference(a, w.a_prime));
  d.checks.push_back(exact_check("membership recomputed", w.member == (d_sym < measure(set_e) / Scalar(n)),
                                 "deficit=" + to_string(w.deficit)));
  auto heavy = fiber_heavy_base(a, set_e, Scalar(1) / Scalar(n));
  d.checks.push_back(exact_check("heavy fibers inside E", is_subset(heavy, set_e)));
  Json j;
  j["kind"] = "residual";
  j["E"] = interval_set_to_json(set_e);
  j["A"] = rect_set_to_json(a);
  j["A_prime"] = rect_set_to_json(w.a_prime);
  j["member"] = w.member;
  j["deficit"] = scalar_to_json(w.deficit);
  j["heavy_base"] = interval_set_to_json(heavy);
  d.artifact = std::move(j);
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"thm1", "thm3", "thm4", "thm5", "thm6", "ex3-sweep", "residual"};
  return names;
}

DemoResult run_demo(const std::string& name, const DemoParams& p) {
  if (std::find(demo_names().begin(), demo_names().end(), name) == demo_names().end()) {
    throw ValidationError("unknown demo '" + name + "'");
  }
  if (p.eps <= 0) throw ValidationError("epsilon must be positive");
  DemoResult d;
  d.name = name;
  Engine e(load_scheme(p.scheme), p.stage_cap);
  if (name == "thm1") demo_thm1(e, p, d);
  if (name == "thm3") demo_thm3(e, p, d);
  if (name == "thm4") demo_thm4(e, p, d);
  if (name == "thm5") demo_thm5(p, d);
  if (name == "thm6") demo_thm6(e, p, d);
  if (name == "ex3-sweep") demo_ex3(p, d);
  if (name == "residual") demo_residual(e, p, d);
  d.artifact["params"] = params_json(name, p);
  d.refuted = std::any_of(d.checks.begin(), d.checks.end(), [](const DemoCheck& c) { return c.status == "exact-fail"; });
  std::ostringstream s;
  s << "demo " << name << " (" << p.scheme << ")\n";
  for (const auto& c : d.checks) {
    s << "  [" << c.status << "] " << c.name;
    if (!c.detail.empty()) s << ": " << c.detail;
    s << "\n";
  }
  s << (d.refuted ? "REFUTED\n" : "ok\n");
  d.summary = s.str();
  return d;
}

std::vector<DemoCheck> verify_artifact(const Json& input) {
  const Json& j = input.contains("artifact") ? input["artifact"] : input;
  if (!j.is_object() || !j.contains("kind")) throw ValidationError("artifact has no \"kind\"");
  std::string kind = j["kind"];
  auto set = [&](const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("artifact lacks \"") + key + "\"");
    return interval_set_from_json(j[key]);
  };
  std::vector<DemoCheck> out;
  if (kind == "thm1") {
    std::int64_t h = j["h"];
    auto b = set("B"), e = set("E"), abar = set("Abar"), a = set("A"), dd = set("D");
    out.push_back(exact_check("E_h small", measure(e) < Scalar(1, static_cast<unsigned long>(h))));
    out.push_back(exact_check("Abar in B", is_subset(abar, b)));
    out.push_back(exact_check("mu(Abar) = mu(B)/h", measure(abar) * h == measure(b)));
    out.push_back(exact_check("mu(A) = h mu(Abar)", measure(a) == measure(abar) * h));
    out.push_back(exact_check("D = B u E u A", dd == unite(unite(b, e), a)));
  } else if (kind == "thm4") {
    std::int64_t h = j["h"];
    auto c = set("C"), dd = set("D");
    Scalar bound = make_scalar(2, h + 1);
    out.push_back(exact_check("C and D disjoint", intersect(c, dd).empty()));
    out.push_back(exact_check("mu(C) < 2/(h+1)", measure(c) < bound));
    out.push_back(exact_check("mu(D) < 2/(h+1)", measure(dd) < bound));
  } else if (kind == "thm6") {
    int n = j["N"];
    auto a = set("A"), outer = set("B_outer");
    bool feasible = j["feasible"];
    out.push_back(exact_check("feasibility gate",
                              feasible == (measure(a) < Scalar(1, static_cast<unsigned long>(2 * (n + 1))))));
    out.push_back(exact_check("B disjoint from A", disjoint(outer, a)));
  } else if (kind == "thm3-pairs") {
    std::vector<IntervalSet> all;
    for (const auto& pr : j["pairs"]) {
      all.push_back(interval_set_from_json(pr["C"]));
      all.push_back(interval_set_from_json(pr["D"]));
    }
    out.push_back(exact_check("pairs pairwise disjoint", all_disjoint(all)));
  } else if (kind == "thm5") {
    bool ok = true;
    for (const auto& g : j["generators"]) {
      int i = g["i"];
      auto idx = g["indices"].get<std::vector<std::int64_t>>();
      std::int64_t top = idx.empty() ? 0 : idx.back();
      ok = ok && thm5_indices(i, top) == idx;
    }
    out.push_back(exact_check("index sets follow the formula", ok));
  } else if (kind == "residual") {
    auto e = set("E");
    auto a = rect_set_from_json(j["A"]), ap = rect_set_from_json(j["A_prime"]);
    std::int64_t n = input.contains("artifact") ? input["artifact"]["params"]["n"].get<std::int64_t>() : 0;
    out.push_back(exact_check("A' = A u (E x [0,1))", ap == unite(a, RectSet::product(e, IntervalSet::full()))));
    if (n > 0) {
      bool member = j["member"];
      out.push_back(exact_check("membership", member == (measure(symmetric_difference(a, ap)) < measure(e) / Scalar(n))));
    }
  } else {
    throw ValidationError("no exact checks known for artifact kind '" + kind + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output.

std::string to_csv(const ScanReport& r) {
  std::ostringstream s;
  s << "# " << kReportVersion << " scan scheme=" << r.scheme << " A=" << r.a_expr << " B=" << r.b_expr
    << " eps=" << to_string(r.eps) << " n=" << r.n_from << ".." << r.n_to << "\n";
  s << "n,lo,hi,status\n";
  for (const auto& row : r.rows) {
    s << row.n << "," << to_string(row.value.lo) << "," << to_string(row.value.hi) << "," << status_of(row.value) << "\n";
  }
  s << "# summary min_lo=" << to_string(r.min_lo) << " max_hi=" << to_string(r.max_hi)
    << " achieved_eps=" << to_string(r.achieved_eps) << "\n";
  return s.str();
}

Json to_json(const ScanReport& r) {
  Json j;
  j["version"] = kReportVersion;
  j["report"] = "scan";
  j["scheme"] = r.scheme;
  j["A"] = r.a_expr;
  j["B"] = r.b_expr;
  j["eps"] = scalar_to_json(r.eps);
  j["n_from"] = r.n_from;
  j["n_to"] = r.n_to;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n}, {"lo", scalar_to_json(row.value.lo)}, {"hi", scalar_to_json(row.value.hi)},
                    {"status", status_of(row.value)}});
  }
  j["rows"] = std::move(rows);
  j["summary"] = {{"min_lo", scalar_to_json(r.min_lo)},
                  {"max_hi", scalar_to_json(r.max_hi)},
                  {"achieved_eps", scalar_to_json(r.achieved_eps)}};
  return j;
}

std::string to_csv(const JoiningReport& r) {
  std::ostringstream s;
  s << "# " << kReportVersion << " joining scheme=" << r.scheme << " A=" << r.a_expr << " B=" << r.b_expr
    << " target=" << join_rationals(r.target.a) << " eps=" << to_string(r.eps) << " stages=" << r.stage_from << ".."
    << r.stage_to << "\n";
  s << "stage,k,lhs_lo,lhs_hi,rhs_lo,rhs_hi,gap_lo,gap_hi,status\n";
  for (const auto& row : r.rows) {
    s << row.stage << "," << row.k << "," << to_string(row.lhs.lo) << "," << to_string(row.lhs.hi) << ","
      << to_string(row.rhs.lo) << "," << to_string(row.rhs.hi) << "," << to_string(row.gap_lo) << ","
      << to_string(row.gap_hi) << ",surrogate\n";
  }
  return s.str();
}

Json to_json(const JoiningReport& r) {
  Json j;
  j["version"] = kReportVersion;
  j["report"] = "joining";
  j["scheme"] = r.scheme;
  j["A"] = r.a_expr;
  j["B"] = r.b_expr;
  Json target = Json::array();
  for (const auto& a : r.target.a) target.push_back(scalar_to_json(a));
  j["target"] = std::move(target);
  j["eps"] = scalar_to_json(r.eps);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"stage", row.stage},
                    {"k", row.k},
                    {"lhs", certified_to_json(row.lhs)},
                    {"rhs", certified_to_json(row.rhs)},
                    {"gap", {{"lo", scalar_to_json(row.gap_lo)}, {"hi", scalar_to_json(row.gap_hi)}}},
                    {"status", "surrogate"}});
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string to_csv(const LiminfReport& r) {
  return to_csv(r.scan) + "# liminf min_lo=" + to_string(r.min_lo) + " label=" + r.label + "\n";
}

Json to_json(const LiminfReport& r) {
  Json j = to_json(r.scan);
  j["report"] = "liminf";
  j["min_lo"] = scalar_to_json(r.min_lo);
  j["label"] = r.label;
  return j;
}

std::string to_csv(const std::vector<CoverageRow>& rows, const std::string& header) {
  std::ostringstream s;
  s << "# " << kReportVersion << " " << header << "\n";
  s << "L,k,lo,hi,status\n";
  for (const auto& r : rows) {
    s << r.length << "," << r.k << "," << to_string(r.coverage.lo) << "," << to_string(r.coverage.hi) << ","
      << status_of(r.coverage) << "\n";
  }
  return s.str();
}

Json to_json(const DemoResult& d) {
  Json j;
  j["version"] = kReportVersion;
  j["demo"] = d.name;
  j["refuted"] = d.refuted;
  j["checks"] = checks_to_json(d.checks);
  j["artifact"] = d.artifact;
  return j;
}

}  // namespace rankone
