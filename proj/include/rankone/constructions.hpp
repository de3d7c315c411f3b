#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankone/certified.hpp"
#include "rankone/engine.hpp"
#include "rankone/json_io.hpp"

namespace rankone {

// ---------------------------------------------------------------------------
// Dense collection from Rohlin towers.

/// One member D_h = B_h ∪ E_h ∪ A_h of the dense collection, where A_h is the
/// column over Ā_h (the leftmost 1/h of the base).
struct DenseFamilyElement {
  std::int64_t h = 1;
  int stage = 1;
  IntervalSet base;   ///< B_h
  IntervalSet error;  ///< E_h, μ(E_h) < 1/h
  IntervalSet abar;   ///< Ā_h ⊆ B_h, μ(Ā_h) = μ(B_h)/h
  IntervalSet column; ///< A_h = ⊎_{i<h} TⁱĀ_h
  IntervalSet dense;  ///< D_h
};

DenseFamilyElement thm1_dense_family(const Engine& engine, std::int64_t h);

struct LemmaRow {
  std::int64_t n = 0;
  CertifiedValue correlation;  ///< μ(A ∩ TⁿB)
  Scalar margin_lo, margin_hi; ///< correlation minus μ(Ā)
};

/// Finite-horizon check of μ(A ∩ TⁿB) ≥ μ(Ā) for A = ⊎_{i<h} TⁱĀ (or a
/// given superset A).
struct Lemma1Report {
  bool translates_disjoint = false;  ///< TⁱĀ pairwise disjoint, exactly
  bool translates_inside = false;    ///< ⊎TⁱĀ ⊆ A, exactly
  CertifiedValue coverage;           ///< μ(⋃_{i<h} T⁻ⁱB)
  bool coverage_ok = false;          ///< coverage.lo ≥ 1 − eps
  std::string failure;               ///< first failed hypothesis, empty when all hold
  std::vector<LemmaRow> rows;
  Scalar abar_measure;
  Scalar min_margin_lo;
  bool refuted = false;              ///< some margin_hi < 0

  bool hypotheses_hold() const { return failure.empty(); }
};

Lemma1Report lemma1_check(const Engine& engine, const IntervalSet& abar, std::int64_t h,
                          const IntervalSet& b, std::int64_t n_from, std::int64_t n_to,
                          const Scalar& eps, const std::optional<IntervalSet>& a = std::nullopt);

// ---------------------------------------------------------------------------
// Dense algebra from small lightly mixing pairs.

struct MixingPair {
  IntervalSet c;
  IntervalSet d;
  Scalar eps;  ///< lower bound on liminf μ(TⁿC ∩ D)
};

struct PairFamily {
  std::vector<MixingPair> pairs;        ///< C_m, D_m, ε_m for m = 1, 2, ...
  std::vector<std::size_t> selected;    ///< indices into the raw list
};

/// Picks a subsequence whose later pairs have total mass below a quarter of
/// each earlier ε, then removes later pairs from earlier ones. Throws
/// ValidationError when no such subsequence of length 2 exists.
PairFamily thm3_refine_pairs(std::span<const MixingPair> raw);

/// C_m = Ĉ_m minus every later Ĉ_n ∪ D̂_n (same for D_m), with no selection.
PairFamily subtract_later_pairs(std::span<const MixingPair> raw);

enum class PatternPiece { Empty = 0, C = 1, D = 2, Both = 3 };

/// Digit i (1-based, least significant first) of m in base 4.
PatternPiece base4_pattern(int i, std::int64_t m);

struct AlgebraTruncation {
  int depth = 0;
  int range = 0;
  std::vector<IntervalSet> generators;              ///< F_1..F_depth
  std::vector<std::vector<PatternPiece>> pattern;   ///< pattern[i-1][m-1]

  PatternPiece at(int i, int m) const { return pattern[i - 1][m - 1]; }
};

AlgebraTruncation thm3_algebra_generators(const PairFamily& family, int depth, int range);

// ---------------------------------------------------------------------------
// Disjoint small pairs from a Rohlin tower and first returns.

struct FirstReturnPiece {
  std::int64_t return_time = 0;
  IntervalSet source;   ///< points of E returning to B first after return_time steps
  IntervalSet landing;  ///< T^{return_time}(source) ⊆ B
};

struct FirstReturnDecomposition {
  std::vector<FirstReturnPiece> pieces;  ///< sorted by return time
  IntervalSet unresolved;
  Scalar unresolved_mass;
};

/// Splits E by first-entry time i_x = min{i ≥ 0 : Tⁱx ∈ B}. B must be a union
/// of whole levels of some stage ≤ stage_cap.
FirstReturnDecomposition first_return_decomposition(const Engine& engine, const IntervalSet& e,
                                                    const IntervalSet& b, int stage_cap,
                                                    const Scalar& eps);

struct MildMixingPair {
  std::int64_t h = 1;
  int stage = 1;
  IntervalSet base;   ///< B of the height-(h+1) tower
  IntervalSet error;  ///< E, μ(E) < μ(B)/(4(h+1))
  IntervalSet c;
  IntervalSet d;
  Scalar unresolved;  ///< mass of E whose return to B was not found
  bool slice_branch = false;  ///< μ(E) = 0, C built from a thin base slice
};

MildMixingPair thm4_mm_pair(const Engine& engine, std::int64_t h, const Scalar& eps);

// ---------------------------------------------------------------------------
// Sweeping-out generators and the limit-joining obstruction.

struct SweepGenerator {
  int i = 1;
  std::vector<std::int64_t> indices;  ///< 1-based indices into the C list
  IntervalSet set;
};

/// Indices m·2^{i+1} + j, m ≥ 0, 1 ≤ j ≤ 2^i, up to max_index.
std::vector<std::int64_t> thm5_indices(int i, std::int64_t max_index);

/// F_1..F_k over the available (pairwise disjoint) sets.
std::vector<SweepGenerator> thm5_generators(std::span<const IntervalSet> c_list, int k);

struct Obstruction {
  int n_max = 1;
  IntervalSet a;
  bool feasible = false;     ///< μ(A) < 1/(2(N+1))
  IntervalSet outer;         ///< ⊇ (⋃_{i≤N} T⁻ⁱA)ᶜ
  Scalar unresolved_mass;    ///< μ(outer) − μ(true B) ≤ this
  CertifiedValue measure;    ///< enclosure of μ(B)
};

Obstruction thm6_obstruction(const Engine& engine, int n_max, const IntervalSet& a, const Scalar& eps);

// ---------------------------------------------------------------------------
// Artifacts.

Json to_json(const DenseFamilyElement& f);
Json to_json(const Lemma1Report& r);
Json to_json(const PairFamily& f);
Json to_json(const AlgebraTruncation& t);
Json to_json(const MildMixingPair& p);
Json to_json(const std::vector<SweepGenerator>& gens);
Json to_json(const Obstruction& o);

}  // namespace rankone
