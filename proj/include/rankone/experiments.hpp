#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankone/certified.hpp"
#include "rankone/engine.hpp"
#include "rankone/json_io.hpp"
#include "rankone/products.hpp"

namespace rankone {

/// Written into every report header; bump when columns or keys change.
inline constexpr const char* kReportVersion = "rankone-report/1";

inline constexpr const char* kLiminfLabel = "finite-horizon minimum, not a liminf certificate";

/// One-line name for a scheme: the preset name, or its rules.
std::string scheme_label(const SchemeSpec& spec);

struct ScanRow {
  std::int64_t n = 0;
  CertifiedValue value;
};

struct ScanReport {
  std::string scheme;
  std::string a_expr, b_expr;
  Scalar eps;
  std::int64_t n_from = 0, n_to = 0;
  std::vector<ScanRow> rows;
  Scalar min_lo, max_hi;
  Scalar achieved_eps;  ///< widest enclosure among the rows
};

/// μ(TⁿA ∩ B) for n in [n_from, n_to].
ScanReport run_scan(const Engine& engine, const SetExpr& a, const SetExpr& b, std::int64_t n_from,
                    std::int64_t n_to, const Scalar& eps);

struct JoiningTarget {
  std::vector<Scalar> a;  ///< a_0..a_N
  int n() const { return static_cast<int>(a.size()) - 1; }
};

/// "p/q,p/q,..." into a target; throws ValidationError when empty or negative.
JoiningTarget parse_joining_target(const std::string& text);

struct JoiningRow {
  int stage = 0;
  std::int64_t k = 0;  ///< h_stage
  CertifiedValue lhs;  ///< μ(TᵏA ∩ B)
  CertifiedValue rhs;  ///< Σ aᵢ μ(T⁻ⁱA ∩ B)
  Scalar gap_lo;       ///< distance between the two enclosures
  Scalar gap_hi;       ///< largest possible |lhs − rhs|
};

struct JoiningReport {
  std::string scheme;
  std::string a_expr, b_expr;
  JoiningTarget target;
  Scalar eps;
  int stage_from = 0, stage_to = 0;
  std::vector<JoiningRow> rows;
};

JoiningReport run_joining_check(const Engine& engine, const SetExpr& a, const SetExpr& b,
                                const JoiningTarget& target, int stage_from, int stage_to, const Scalar& eps);

struct LiminfReport {
  ScanReport scan;
  Scalar min_lo;
  std::string label = kLiminfLabel;
};

LiminfReport liminf_horizon(const Engine& engine, const SetExpr& a, const SetExpr& b, std::int64_t n_from,
                            std::int64_t n_to, const Scalar& eps);

struct DemoParams {
  std::string scheme = "chacon3";
  std::int64_t h = 4;
  int big_n = 1;                         ///< N for thm6
  std::string a_expr = "interval(0,1/5)";
  int k = 2;                             ///< generator depth (thm3, thm5)
  int m = 8;                             ///< range (thm3, thm5)
  std::int64_t n_from = 1, n_to = 100;   ///< horizon (thm1, thm4)
  int stage_from = 4, stage_to = 12;     ///< heights (thm6)
  std::int64_t length = 20;              ///< sequence length (ex3-sweep)
  Scalar eps = default_epsilon();
  std::uint64_t seed = 1;
  int stage_cap = kDefaultStageCap;
};

struct DemoCheck {
  std::string name;
  std::string status;  ///< "exact-pass", "exact-fail" or "surrogate"
  std::string detail;
};

struct DemoResult {
  std::string name;
  Json artifact;
  std::vector<DemoCheck> checks;
  bool refuted = false;  ///< some exact check failed
  std::string summary;
};

/// name ∈ {thm1, thm3, thm4, thm5, thm6, ex3-sweep, residual}.
DemoResult run_demo(const std::string& name, const DemoParams& params);
const std::vector<std::string>& demo_names();

/// Re-checks the exact invariants recorded in a demo or builder artifact.
std::vector<DemoCheck> verify_artifact(const Json& artifact);

// Output. CSV starts with a "# <version> ..." line; every number is a rational string.
std::string to_csv(const ScanReport& r);
Json to_json(const ScanReport& r);
std::string to_csv(const JoiningReport& r);
Json to_json(const JoiningReport& r);
std::string to_csv(const LiminfReport& r);
Json to_json(const LiminfReport& r);
std::string to_csv(const std::vector<CoverageRow>& rows, const std::string& header);
Json to_json(const DemoResult& d);
std::string status_of(const CertifiedValue& v);

}  // namespace rankone
