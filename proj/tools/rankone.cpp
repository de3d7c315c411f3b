#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "rankone/errors.hpp"
#include "rankone/experiments.hpp"

using namespace rankone;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRefuted = 2;
constexpr int kExitResource = 3;

struct Common {
  std::string scheme = "chacon3";
  std::string a = "base(2)";
  std::string b = "base(2)";
  std::string eps = "1/1000000";
  int stage_cap = kDefaultStageCap;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::string out;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + c.out);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

SequenceSpec parse_sequence(const std::string& text, std::uint64_t seed) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("sequence must look like kind:args, got '" + text + "'");
  std::string kind = text.substr(0, colon), args = text.substr(colon + 1);
  std::vector<std::int64_t> nums;
  std::string item;
  if (kind == "heights") {
    auto dots = args.find("..");
    if (dots == std::string::npos) throw ValidationError("heights need a range like heights:1..12");
    return SequenceSpec::scheme_heights(std::stoi(args.substr(0, dots)), std::stoi(args.substr(dots + 2)));
  }
  std::stringstream ss(args);
  while (std::getline(ss, item, ',')) nums.push_back(std::stoll(item));
  if (kind == "list") return SequenceSpec::explicit_list(nums);
  if (kind == "arith" && nums.size() == 3) return SequenceSpec::arithmetic(nums[0], nums[1], nums[2]);
  if (kind == "random" && nums.size() == 2) return SequenceSpec::random(seed, nums[0], nums[1]);
  throw ValidationError("unknown sequence '" + text + "' (use heights:a..b, list:..., arith:start,step,count, random:count,max)");
}

void add_scheme(CLI::App* app, Common& c) {
  app->add_option("--scheme", c.scheme, "preset name or scheme file")->capture_default_str();
  app->add_option("--stage-cap", c.stage_cap, "deepest stage to build")->capture_default_str();
}

void add_sets(CLI::App* app, Common& c) {
  app->add_option("--A", c.a, "set expression for A")->capture_default_str();
  app->add_option("--B", c.b, "set expression for B")->capture_default_str();
}

void add_output(CLI::App* app, Common& c, const std::vector<std::string>& formats) {
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
  app->add_option("--out", c.out, "write output to this file");
  app->add_option("--eps", c.eps, "tolerance p/q")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments with rank-one cutting-and-stacking transformations"};
  app.require_subcommand(1);
  Common c;
  int rc = kExitOk;

  // scheme parse
  auto* scheme_cmd = app.add_subcommand("scheme", "scheme utilities");
  scheme_cmd->require_subcommand(1);
  auto* parse_cmd = scheme_cmd->add_subcommand("parse", "parse a scheme and print its normal form");
  std::string block;
  add_scheme(parse_cmd, c);
  parse_cmd->add_option("--block", block, "block rule such as BB1B (overrides --scheme)");
  parse_cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));
  parse_cmd->add_option("--out", c.out, "write output to this file");
  parse_cmd->callback([&] {
    SchemeSpec spec = block.empty() ? load_scheme(c.scheme) : compile_block_rule(block);
    if (c.format == "json") {
      auto norm = normalize(spec);
      Tower t(spec, c.stage_cap);
      Json heights = Json::array();
      for (int n = 1; n <= std::min(6, t.stage_cap()); ++n) heights.push_back(t.height(n));
      Json j;
      j["version"] = kReportVersion;
      j["scheme"] = serialize_scheme(spec);
      j["base_width"] = scalar_to_json(norm.base_width);
      j["spacer_mass"] = scalar_to_json(norm.spacer_mass);
      j["heights"] = std::move(heights);
      emit(c, dump(j));
    } else {
      emit(c, serialize_scheme(spec));
    }
  });

  // tower show
  auto* tower_cmd = app.add_subcommand("tower", "tower utilities");
  tower_cmd->require_subcommand(1);
  auto* show_cmd = tower_cmd->add_subcommand("show", "print the levels of one stage");
  int stage = 1;
  add_scheme(show_cmd, c);
  show_cmd->add_option("--stage", stage, "stage index")->required();
  show_cmd->add_option("--out", c.out, "write output to this file");
  show_cmd->callback([&] {
    Json j = stage_to_json(build_stage(load_scheme(c.scheme), stage));
    emit(c, j.dump() + "\n");
  });

  // scan / liminf
  std::int64_t from = 1, to = 20;
  auto* scan_cmd = app.add_subcommand("scan", "certified mu(T^n A & B) over a range of n");
  auto* liminf_cmd = app.add_subcommand("liminf", "minimum lower bound of mu(T^n A & B) over a finite range");
  for (auto* cmd : {scan_cmd, liminf_cmd}) {
    add_scheme(cmd, c);
    add_sets(cmd, c);
    add_output(cmd, c, {"csv", "json"});
    cmd->add_option("--from", from, "first n")->capture_default_str();
    cmd->add_option("--to", to, "last n")->capture_default_str();
  }
  scan_cmd->callback([&] {
    Engine e(load_scheme(c.scheme), c.stage_cap);
    auto r = run_scan(e, parse_set_expr(c.a), parse_set_expr(c.b), from, to, parse_rational(c.eps));
    emit(c, c.format == "json" ? dump(to_json(r)) : to_csv(r));
  });
  liminf_cmd->callback([&] {
    Engine e(load_scheme(c.scheme), c.stage_cap);
    auto r = liminf_horizon(e, parse_set_expr(c.a), parse_set_expr(c.b), from, to, parse_rational(c.eps));
    emit(c, c.format == "json" ? dump(to_json(r)) : to_csv(r));
  });

  // joining
  auto* join_cmd = app.add_subcommand("joining", "compare mu(T^{h_n} A & B) with a target joining");
  std::string target = "1/2,1/2";
  int stage_from = 4, stage_to = 12;
  add_scheme(join_cmd, c);
  add_sets(join_cmd, c);
  add_output(join_cmd, c, {"csv", "json"});
  join_cmd->add_option("--target", target, "coefficients a_0,...,a_N")->capture_default_str();
  join_cmd->add_option("--from", stage_from, "first stage")->capture_default_str();
  join_cmd->add_option("--to", stage_to, "last stage")->capture_default_str();
  join_cmd->callback([&] {
    Engine e(load_scheme(c.scheme), c.stage_cap);
    auto r = run_joining_check(e, parse_set_expr(c.a), parse_set_expr(c.b), parse_joining_target(target), stage_from,
                               stage_to, parse_rational(c.eps));
    emit(c, c.format == "json" ? dump(to_json(r)) : to_csv(r));
  });

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "run a construction with its exact checks");
  std::string demo_name;
  DemoParams dp;
  std::string demo_format = "text";
  demo_cmd->add_option("name", demo_name, "thm1, thm3, thm4, thm5, thm6, ex3-sweep or residual")
      ->required()
      ->check(CLI::IsMember(demo_names()));
  demo_cmd->add_option("--scheme", dp.scheme, "preset name or scheme file")->capture_default_str();
  demo_cmd->add_option("--stage-cap", dp.stage_cap, "deepest stage to build")->capture_default_str();
  demo_cmd->add_option("--height", dp.h, "tower height (thm1, thm4) or n (residual)")->capture_default_str();
  demo_cmd->add_option("--N", dp.big_n, "N (thm6)")->capture_default_str();
  demo_cmd->add_option("--A", dp.a_expr, "set expression (thm6: A, residual: E)")->capture_default_str();
  demo_cmd->add_option("--k", dp.k, "generator depth")->capture_default_str();
  demo_cmd->add_option("--M", dp.m, "generator range")->capture_default_str();
  demo_cmd->add_option("--from", dp.n_from, "first n")->capture_default_str();
  demo_cmd->add_option("--to", dp.n_to, "last n")->capture_default_str();
  demo_cmd->add_option("--stage-from", dp.stage_from, "first stage (thm6)")->capture_default_str();
  demo_cmd->add_option("--stage-to", dp.stage_to, "last stage (thm6)")->capture_default_str();
  demo_cmd->add_option("--length", dp.length, "sequence length (ex3-sweep)")->capture_default_str();
  demo_cmd->add_option("--seed", dp.seed, "random seed")->capture_default_str();
  demo_cmd->add_option("--eps", c.eps, "tolerance p/q")->capture_default_str();
  demo_cmd->add_option("--format", demo_format, "text summary or json artifact")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  demo_cmd->add_option("--out", c.out, "write the JSON artifact to this file");
  demo_cmd->callback([&] {
    dp.eps = parse_rational(c.eps);
    auto d = run_demo(demo_name, dp);
    if (demo_format == "json") {
      emit(c, dump(to_json(d)));
    } else {
      std::cout << d.summary;
      if (!c.out.empty()) emit(c, dump(to_json(d)));
    }
    if (d.refuted) rc = kExitRefuted;
  });

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "re-check the exact invariants of a saved artifact");
  std::string artifact_path;
  verify_cmd->add_option("artifact", artifact_path, "JSON artifact written by demo --out")->required();
  verify_cmd->callback([&] {
    std::ifstream f(artifact_path);
    if (!f) throw ValidationError("cannot read " + artifact_path);
    Json j;
    try {
      j = Json::parse(f);
    } catch (const nlohmann::json::exception& err) {
      throw ParseError(std::string("bad JSON: ") + err.what(), 1, 1);
    }
    bool failed = false;
    for (const auto& check : verify_artifact(j)) {
      std::cout << "[" << check.status << "] " << check.name << "\n";
      failed = failed || check.status == "exact-fail";
    }
    std::cout << (failed ? "REFUTED\n" : "ok\n");
    if (failed) rc = kExitRefuted;
  });

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "coverage of unions of T^{k_i} A along a sequence");
  std::string seq = "heights:1..12";
  std::string scheme_y, a_y = "interval(0,1)";
  add_scheme(sweep_cmd, c);
  sweep_cmd->add_option("--A", c.a, "set expression for A")->capture_default_str();
  add_output(sweep_cmd, c, {"csv"});
  sweep_cmd->add_option("--seq", seq, "heights:a..b, list:k1,k2,..., arith:start,step,count or random:count,max")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", c.seed, "seed for random sequences")->capture_default_str();
  sweep_cmd->add_option("--scheme-y", scheme_y, "second factor: sweep A x A_y in the product");
  sweep_cmd->add_option("--A-y", a_y, "set expression for the second factor")->capture_default_str();
  sweep_cmd->callback([&] {
    Engine e(load_scheme(c.scheme), c.stage_cap);
    auto spec = parse_sequence(seq, c.seed);
    auto ks = spec.materialize(&e.tower());
    auto sa = e.evaluate(parse_set_expr(c.a));
    std::string header = "sweep scheme=" + scheme_label(e.spec()) + " A=" + to_string(parse_set_expr(c.a)) +
                         " seq=" + spec.describe() + " eps=" + c.eps;
    if (scheme_y.empty()) {
      emit(c, to_csv(sweep_probe(e, sa, ks, parse_rational(c.eps)), header));
    } else {
      Engine y(load_scheme(scheme_y), c.stage_cap);
      auto sy = y.evaluate(parse_set_expr(a_y));
      header += " scheme_y=" + scheme_label(y.spec()) + " A_y=" + to_string(parse_set_expr(a_y));
      emit(c, to_csv(sweep_probe(e, y, RectSet::product(sa, sy), ks, parse_rational(c.eps)), header));
    }
  });

  // uso
  auto* uso_cmd = app.add_subcommand("uso", "worst coverage over sampled N-tuples (not exhaustive)");
  int tuple = 8, trials = 64;
  std::int64_t max_value = 1000;
  add_scheme(uso_cmd, c);
  uso_cmd->add_option("--A", c.a, "set expression for A")->capture_default_str();
  add_output(uso_cmd, c, {"csv", "json"});
  uso_cmd->add_option("--N", tuple, "tuple size")->capture_default_str();
  uso_cmd->add_option("--trials", trials, "number of sampled tuples")->capture_default_str();
  uso_cmd->add_option("--max", max_value, "tuple entries lie in [1, max]")->capture_default_str();
  uso_cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  uso_cmd->callback([&] {
    Engine e(load_scheme(c.scheme), c.stage_cap);
    auto r = uso_probe(e, e.evaluate(parse_set_expr(c.a)), tuple, trials, c.seed, parse_rational(c.eps), max_value);
    Json tuple_json = r.worst_tuple;
    if (c.format == "json") {
      Json j;
      j["version"] = kReportVersion;
      j["report"] = "uso";
      j["label"] = "sampled tuples only, not exhaustive";
      j["scheme"] = scheme_label(e.spec());
      j["A"] = to_string(parse_set_expr(c.a));
      j["N"] = r.n;
      j["trials"] = r.trials;
      j["seed"] = r.seed;
      j["max"] = r.max_value;
      j["worst"] = certified_to_json(r.worst);
      j["worst_tuple"] = std::move(tuple_json);
      emit(c, dump(j));
    } else {
      std::ostringstream s;
      s << "# " << kReportVersion << " uso scheme=" << scheme_label(e.spec()) << " A=" << to_string(parse_set_expr(c.a))
        << " N=" << r.n << " trials=" << r.trials << " seed=" << r.seed << " max=" << r.max_value
        << " (sampled tuples only, not exhaustive)\n";
      s << "worst_lo,worst_hi,worst_tuple\n";
      s << to_string(r.worst.lo) << "," << to_string(r.worst.hi) << ",";
      for (std::size_t i = 0; i < r.worst_tuple.size(); ++i) s << (i ? " " : "") << r.worst_tuple[i];
      s << "\n";
      emit(c, s.str());
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what();
    if (e.achieved_unresolved()) std::cerr << " (unresolved mass reached " << to_string(*e.achieved_unresolved()) << ")";
    std::cerr << "\n";
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid number: " << e.what() << "\n";
    return kExitUsage;
  }
  return rc;
}
