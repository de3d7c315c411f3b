#include "rankone/scheme.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "rankone/errors.hpp"
#include "text_cursor.hpp"

namespace rankone {

std::int64_t StageRule::spacer_count() const {
  return std::accumulate(spacers.begin(), spacers.end(), std::int64_t{0});
}

const StageRule& SchemeSpec::rule_for(int n) const {
  if (n >= 1 && static_cast<std::size_t>(n) <= prefix.size()) return prefix[n - 1];
  return tail;
}

bool same_rules(const SchemeSpec& a, const SchemeSpec& b) {
  return a.prefix == b.prefix && a.tail == b.tail;
}

void validate(const StageRule& rule) {
  if (rule.cuts < 2) throw ValidationError("cuts must be at least 2, got " + std::to_string(rule.cuts));
  if (rule.spacers.size() != static_cast<std::size_t>(rule.cuts)) {
    throw ValidationError("spacer list has " + std::to_string(rule.spacers.size()) +
                          " entries but cuts=" + std::to_string(rule.cuts));
  }
  for (auto s : rule.spacers) {
    if (s < 0) throw ValidationError("negative spacer count " + std::to_string(s));
  }
}

void validate(const SchemeSpec& spec) {
  for (const auto& r : spec.prefix) validate(r);
  validate(spec.tail);
  if (spec.name) {
    auto p = preset(*spec.name);
    if (!p || !same_rules(*p, spec)) {
      throw ValidationError("scheme name '" + *spec.name + "' does not identify a matching preset");
    }
  }
}

SchemeSpec chacon3() { return SchemeSpec{{}, StageRule{3, {0, 1, 0}}, "chacon3"}; }

SchemeSpec staircase4() { return SchemeSpec{{}, StageRule{4, {0, 1, 2, 3}}, "staircase4"}; }

std::optional<SchemeSpec> preset(std::string_view name) {
  if (name == "chacon3") return chacon3();
  if (name == "staircase4") return staircase4();
  return std::nullopt;
}

namespace {

StageRule compile_block_tokens(detail::TextCursor& cur) {
  std::vector<std::int64_t> slots;
  while (true) {
    cur.skip_space();
    if (cur.done()) break;
    char c = cur.peek();
    if (c == 'B') {
      cur.get();
      slots.push_back(0);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      int l = cur.line(), col = cur.column();
      std::int64_t k = cur.integer();
      if (k <= 0) throw ParseError("spacer count must be a positive integer", l, col);
      if (slots.empty()) throw ValidationError("block rule cannot start with spacers");
      slots.back() += k;
    } else {
      cur.fail(std::string("unexpected character '") + c + "' in block rule");
    }
  }
  if (slots.size() < 2) {
    throw ValidationError("block rule needs at least two B tokens, found " + std::to_string(slots.size()));
  }
  return StageRule{static_cast<int>(slots.size()), std::move(slots)};
}

StageRule parse_rule(detail::TextCursor& cur) {
  if (!cur.accept("cuts")) cur.fail("expected 'cuts='");
  cur.expect('=');
  std::int64_t cuts = cur.integer();
  if (!cur.accept("spacers")) cur.fail("expected 'spacers='");
  cur.expect('=');
  cur.expect('[');
  std::vector<std::int64_t> spacers;
  if (!cur.accept(']')) {
    do {
      spacers.push_back(cur.integer());
    } while (cur.accept(','));
    cur.expect(']');
  }
  if (cuts > 1'000'000 || cuts < -1'000'000) throw ValidationError("cuts out of range");
  StageRule rule{static_cast<int>(cuts), std::move(spacers)};
  validate(rule);
  return rule;
}

std::string rule_text(const StageRule& r) {
  std::string s = "cuts=" + std::to_string(r.cuts) + " spacers=[";
  for (std::size_t i = 0; i < r.spacers.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(r.spacers[i]);
  }
  return s + "]";
}

}  // namespace

SchemeSpec compile_block_rule(std::string_view text) {
  detail::TextCursor cur(text);
  return SchemeSpec{{}, compile_block_tokens(cur), std::nullopt};
}

SchemeSpec parse_scheme(std::string_view text) {
  std::optional<std::vector<StageRule>> prefix;
  std::optional<StageRule> tail;
  std::optional<SchemeSpec> whole;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    detail::TextCursor cur(line, line_no, 1);
    cur.skip_space();
    if (cur.done()) {
      if (end == text.size()) break;
      continue;
    }
    if (whole) cur.fail("unexpected content after a complete scheme");

    if (cur.accept("prefix:")) {
      if (prefix) cur.fail("duplicate prefix line");
      prefix.emplace();
      cur.skip_space();
      while (!cur.done()) {
        prefix->push_back(parse_rule(cur));
        cur.skip_space();
        if (cur.done()) break;
        cur.expect(';');
      }
    } else if (cur.accept("tail:")) {
      if (tail) cur.fail("duplicate tail line");
      tail = parse_rule(cur);
      cur.skip_space();
      if (!cur.done()) cur.fail("trailing text after tail rule");
    } else if (cur.accept("block:")) {
      if (prefix || tail) cur.fail("block line cannot be combined with prefix/tail");
      whole = SchemeSpec{{}, compile_block_tokens(cur), std::nullopt};
    } else {
      int col = cur.column();
      std::string name = cur.identifier();
      cur.skip_space();
      if (!cur.done()) cur.fail("trailing text after preset name");
      if (prefix || tail) throw ParseError("preset name cannot be combined with prefix/tail", line_no, col);
      auto p = preset(name);
      if (!p) throw ParseError("unknown preset '" + name + "'", line_no, col);
      whole = *p;
    }
    if (end == text.size()) break;
  }

  if (whole) return *whole;
  if (!tail) throw ParseError("scheme has no tail rule", line_no, 1);
  SchemeSpec spec{prefix.value_or(std::vector<StageRule>{}), *tail, std::nullopt};
  validate(spec);
  return spec;
}

std::string serialize_scheme(const SchemeSpec& spec) {
  if (spec.name) {
    auto p = preset(*spec.name);
    if (p && same_rules(*p, spec)) return *spec.name + "\n";
  }
  std::string out;
  if (!spec.prefix.empty()) {
    out += "prefix: ";
    for (std::size_t i = 0; i < spec.prefix.size(); ++i) {
      if (i) out += "; ";
      out += rule_text(spec.prefix[i]);
    }
    out += "\n";
  }
  out += "tail: " + rule_text(spec.tail) + "\n";
  return out;
}

SchemeSpec load_scheme(const std::string& preset_or_path) {
  if (auto p = preset(preset_or_path)) return *p;
  std::ifstream in(preset_or_path);
  if (!in) throw ValidationError("'" + preset_or_path + "' is neither a preset nor a readable scheme file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scheme(ss.str());
}

Normalization normalize(const SchemeSpec& spec) {
  validate(spec);
  // Relative to w₁: stage n+1 width is w₁·∏_{j≤n} 1/r_j and stage n adds
  // spacer_count_n levels of that width.
  Scalar factor = 1;  // h₁ = 1
  Scalar scale = 1;
  for (const auto& rule : spec.prefix) {
    scale /= rule.cuts;
    factor += rule.spacer_count() * scale;
  }
  // Tail: Σ_{m≥1} s·scale/r^m = s·scale/(r−1).
  factor += Scalar(spec.tail.spacer_count()) * scale / (spec.tail.cuts - 1);
  Scalar w1 = 1 / factor;
  return {w1, 1 - w1};
}

}  // namespace rankone
