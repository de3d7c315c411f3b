#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rankone/constructions.hpp"
#include "rankone/engine.hpp"
#include "rankone/errors.hpp"
#include "rankone/experiments.hpp"
#include "rankone/json_io.hpp"
#include "rankone/set_expr.hpp"

using namespace rankone;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Scalar eps6() { return Scalar(1, 1'000'000); }

IntervalSet random_grid_set(std::mt19937_64& rng, std::int64_t den, int max_pieces) {
  std::uniform_int_distribution<int> pieces(0, max_pieces);
  std::uniform_int_distribution<std::int64_t> pt(0, den);
  std::vector<Interval> ivs;
  for (int i = pieces(rng); i > 0; --i) {
    auto a = pt(rng), b = pt(rng);
    if (a > b) std::swap(a, b);
    ivs.push_back({make_scalar(a, den), make_scalar(b, den)});
  }
  return IntervalSet::from_intervals(std::move(ivs));
}

IntervalSet random_levels(std::mt19937_64& rng, const Tower& t, int n) {
  std::vector<Interval> ivs;
  for (std::int64_t l = 0; l < t.height(n); ++l) {
    if (rng() % 2) ivs.push_back(t.level_interval(n, l));
  }
  return IntervalSet::from_intervals(std::move(ivs));
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240601);
  int pairs = 0, checks = 0, both_exact = 0, oracle_exact = 0;
  for (const auto& spec : {chacon3(), staircase4()}) {
    Engine e(spec);
    std::map<int, GridOracle> oracles;
    for (int trial = 0; trial < 100; ++trial) {
      int n = 1 + static_cast<int>(rng() % 5);
      int deep = n + 2;
      auto [it, fresh] = oracles.try_emplace(deep);
      if (fresh) it->second = grid_oracle(e, deep);
      const auto& g = it->second;
      auto a = random_levels(rng, e.tower(), n);
      auto b = random_levels(rng, e.tower(), n);
      ++pairs;
      for (int r = 0; r < 3; ++r) {
        std::int64_t k = static_cast<std::int64_t>(rng() % 101) - 50;
        auto enc = e.correlation(a, b, k, eps6());
        auto orc = g.correlation(a, b, k);
        auto img = e.image_to_stage(a, k, deep);
        ++checks;
        if (enc.width() > eps6()) return {false, "enclosure wider than eps at k=" + std::to_string(k)};
        if (enc.hi < orc.lo || orc.hi < enc.lo) {
          return {false, "disjoint from oracle: n=" + std::to_string(n) + " k=" + std::to_string(k)};
        }
        if (intersection_measure(img.resolved, b) != orc.lo) {
          return {false, "stage-" + std::to_string(deep) + " image differs from the cell count at k=" + std::to_string(k)};
        }
        if (orc.is_exact()) {
          ++oracle_exact;
          if (!enc.contains(orc.lo)) return {false, "enclosure misses exact oracle value"};
        }
        if (enc.is_exact() && !orc.contains(enc.lo)) return {false, "exact value outside oracle bounds"};
        if (enc.is_exact() && orc.is_exact()) {
          ++both_exact;
          if (enc.lo != orc.lo) return {false, "exact values differ"};
        }
      }
    }
  }
  return {true, std::to_string(pairs) + " pairs, " + std::to_string(checks) + " shifts, " +
                    std::to_string(oracle_exact) + " oracle-exact, " + std::to_string(both_exact) + " both exact"};
}

Outcome chacon_structure() {
  Tower t(chacon3());
  std::int64_t h = 1;
  mpz_class pow3 = 3;
  for (int n = 1; n <= 12; ++n) {
    if (t.height(n) != h) return {false, "height at stage " + std::to_string(n)};
    if (t.width(n) != Scalar(2, pow3)) return {false, "width at stage " + std::to_string(n)};
    if (t.pool_measure(n) != Scalar(1, pow3)) return {false, "pool at stage " + std::to_string(n)};
    h = 3 * h + 1;
    pow3 *= 3;
  }
  return {true, "h_12=" + std::to_string(t.height(12))};
}

Outcome lemma1() {
  Engine e(chacon3());
  std::ostringstream s;
  for (std::int64_t h : {2, 4, 8, 16}) {
    auto f = thm1_dense_family(e, h);
    auto b = unite(f.base, f.error);
    auto r = lemma1_check(e, f.abar, h, b, 1, 1000, eps6(), f.column);
    if (!r.hypotheses_hold()) return {false, "h=" + std::to_string(h) + ": " + r.failure};
    if (r.refuted) return {false, "h=" + std::to_string(h) + " refuted"};
    if (r.min_margin_lo < 0) return {false, "h=" + std::to_string(h) + " min margin " + to_string(r.min_margin_lo)};
    for (const auto& row : r.rows) {
      if (row.correlation.width() > eps6()) return {false, "h=" + std::to_string(h) + " wide at n=" + std::to_string(row.n)};
    }
    s << "h=" << h << " margin>=" << to_string(r.min_margin_lo) << " ";
  }
  return {true, s.str() + "n in [1,1000]"};
}

Outcome joining() {
  Engine e(chacon3());
  auto a = parse_set_expr("base(4)");
  auto r = run_joining_check(e, a, a, parse_joining_target("1/2,1/2"), 8, 12, eps6());
  if (r.rows.size() != 5) return {false, "wrong row count"};
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& prev = r.rows[i - 1];
    const auto& cur = r.rows[i];
    Scalar slack = prev.lhs.width() + prev.rhs.width() + cur.lhs.width() + cur.rhs.width();
    if (cur.gap_hi > prev.gap_hi + slack) return {false, "gap grows at stage " + std::to_string(cur.stage)};
  }
  const auto& last = r.rows.back();
  if (last.gap_hi > Scalar(1, 100)) return {false, "gap at n=12 is " + to_string(last.gap_hi)};
  return {true, "gap_hi(12)=" + to_string(last.gap_hi) + ", lhs=" + to_string(last.lhs.lo)};
}

Outcome obstruction() {
  Engine e(chacon3());
  auto a = e.evaluate(parse_set_expr("interval(0,1/5)"));
  auto o = thm6_obstruction(e, 1, a, eps6());
  if (!o.feasible) return {false, "mu(A)=1/5 rejected"};
  for (auto m : {Scalar(1, 4), Scalar(1, 3), Scalar(1, 2)}) {
    if (thm6_obstruction(e, 1, IntervalSet(Scalar(0), m), eps6()).feasible) {
      return {false, "mu(A)=" + to_string(m) + " accepted"};
    }
  }
  Scalar worst = 0;
  for (int n = 9; n <= 12; ++n) {
    auto c = e.correlation(a, o.outer, e.tower().height(n), eps6());
    if (c.hi > Scalar(1, 100)) return {false, "hi=" + to_string(c.hi) + " at n=" + std::to_string(n)};
    if (c.hi > worst) worst = c.hi;
  }
  return {true, "max hi over n in [9,12] = " + to_string(worst)};
}

Outcome tower_pairs() {
  Engine e(chacon3());
  std::ostringstream s;
  for (std::int64_t h : {2, 4, 8}) {
    auto p = thm4_mm_pair(e, h, eps6());
    std::string tag = "h=" + std::to_string(h);
    if (!disjoint(p.c, p.d)) return {false, tag + " C and D meet"};
    Scalar bound = make_scalar(2, h + 1);
    if (!(measure(p.c) < bound) || !(measure(p.d) < bound)) return {false, tag + " too large"};
    Scalar low;
    for (std::int64_t n = 1; n <= 500; ++n) {
      auto c = e.correlation(p.c, p.d, n, eps6());
      if (n == 1 || c.lo < low) low = c.lo;
    }
    if (!(low > 0)) return {false, tag + " min lo " + to_string(low)};
    s << tag << " min lo=" << to_string(low) << " ";
  }
  return {true, s.str()};
}

Outcome combinatorics() {
  std::map<std::pair<int, int>, int> seen;
  for (std::int64_t m = 1; m <= 1024; ++m) {
    std::int64_t d1 = m % 4, d2 = (m / 4) % 4;
    if (static_cast<int>(base4_pattern(1, m)) != d1 || static_cast<int>(base4_pattern(2, m)) != d2) {
      return {false, "digit mismatch at m=" + std::to_string(m)};
    }
    ++seen[{static_cast<int>(base4_pattern(1, m)), static_cast<int>(base4_pattern(2, m))}];
  }
  if (seen.size() != 16) return {false, std::to_string(seen.size()) + " patterns seen"};
  int fewest = 1 << 30;
  for (const auto& [k, v] : seen) fewest = std::min(fewest, v);
  if (fewest < 2) return {false, "a pattern occurs once"};
  for (int i = 1; i <= 3; ++i) {
    std::set<std::int64_t> want;
    std::int64_t step = std::int64_t{1} << (i + 1);
    for (std::int64_t m = 0; m * step < 4096; ++m) {
      for (std::int64_t j = 1; j <= (std::int64_t{1} << i); ++j) {
        if (m * step + j <= 4096) want.insert(m * step + j);
      }
    }
    auto got = thm5_indices(i, 4096);
    if (std::set<std::int64_t>(got.begin(), got.end()) != want || got.size() != want.size()) {
      return {false, "index set i=" + std::to_string(i)};
    }
  }
  return {true, "fewest pattern hits=" + std::to_string(fewest)};
}

Outcome core_algebra() {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 10'000; ++t) {
    std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 60);
    auto a = random_grid_set(rng, den, 6);
    auto b = random_grid_set(rng, den + 7, 6);
    auto c = random_grid_set(rng, 2 * den + 1, 6);
    if (distance(a, c) > distance(a, b) + distance(b, c)) return {false, "triangle inequality, trial " + std::to_string(t)};
    if (measure(unite(a, b)) + measure(intersect(a, b)) != measure(a) + measure(b)) {
      return {false, "inclusion-exclusion, trial " + std::to_string(t)};
    }
    Scalar three = measure(a) + measure(b) + measure(c) - measure(intersect(a, b)) - measure(intersect(a, c)) -
                   measure(intersect(b, c)) + measure(intersect(intersect(a, b), c));
    if (measure(unite(unite(a, b), c)) != three) return {false, "three-set inclusion-exclusion, trial " + std::to_string(t)};
    if (complement(unite(a, b)) != intersect(complement(a), complement(b)) ||
        complement(intersect(a, b)) != unite(complement(a), complement(b))) {
      return {false, "De Morgan, trial " + std::to_string(t)};
    }
    for (const auto* s : {&a, &b, &c}) {
      std::string text = serialize_interval_set(*s);
      auto back = parse_interval_set(text);
      if (back != *s || serialize_interval_set(back) != text) return {false, "round trip, trial " + std::to_string(t)};
    }
  }
  return {true, "10000 triples"};
}

Outcome mass_conservation() {
  std::mt19937_64 rng(5);
  std::vector<SchemeSpec> specs{chacon3(), staircase4(),
                                parse_scheme("prefix: cuts=2 spacers=[1,0]; cuts=5 spacers=[0,0,2,0,1]\n"
                                             "tail: cuts=3 spacers=[2,0,1]"),
                                parse_scheme("tail: cuts=2 spacers=[0,1]")};
  std::vector<std::unique_ptr<Engine>> engines;
  for (const auto& s : specs) engines.push_back(std::make_unique<Engine>(s));
  const std::array<unsigned long, 4> dens{1'000, 10'000, 100'000, 1'000'000};
  for (int t = 0; t < 1000; ++t) {
    const auto& e = *engines[rng() % engines.size()];
    auto a = random_grid_set(rng, 1 + static_cast<std::int64_t>(rng() % 100), 5);
    std::int64_t k = static_cast<std::int64_t>(rng() % 401) - 200;
    Scalar eps(1, dens[rng() % dens.size()]);
    auto img = e.forward_image(a, k, eps);
    if (measure(img.resolved) + img.unresolved_mass != measure(a)) return {false, "mass lost, case " + std::to_string(t)};
    if (img.unresolved_mass > eps) return {false, "unresolved above eps, case " + std::to_string(t)};
    if (img.unresolved_mass != measure(img.source_unresolved)) return {false, "unresolved bookkeeping, case " + std::to_string(t)};
  }
  return {true, "1000 cases"};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string run_capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
  pclose(p);
  return out;
}

Outcome golden_files() {
  std::string dir = RANKONE_GOLDEN_DIR;
  std::ifstream cases(dir + "/cases.txt");
  std::string line;
  int n = 0;
  while (std::getline(cases, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    std::string file = line.substr(0, tab), args = line.substr(tab + 1);
    std::string got = run_capture("\"" RANKONE_CLI "\" " + args);
    if (got != slurp(dir + "/" + file)) return {false, file + " differs"};
    ++n;
  }
  if (n == 0) return {false, "no cases"};
  return {true, std::to_string(n) + " files identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"Chacon structure", chacon_structure},
      {"dense family lemma", lemma1},
      {"limit joining", joining},
      {"obstruction set", obstruction},
      {"disjoint tower pairs", tower_pairs},
      {"generator combinatorics", combinatorics},
      {"core algebra", core_algebra},
      {"mass conservation", mass_conservation},
      {"CLI golden files", golden_files},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    char t[32];
    std::snprintf(t, sizeof t, "%.1fs", secs);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << " " << criteria[i].first << " (" << o.detail << ", " << t
              << ")" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
