#include "rankone/set_expr.hpp"

#include <algorithm>

#include "text_cursor.hpp"

namespace rankone {

namespace {

int parse_stage(detail::TextCursor& cur) {
  int l = cur.line(), c = cur.column();
  std::int64_t n = cur.integer();
  if (n < 1 || n > 1'000'000) throw ParseError("stage must be a positive integer", l, c);
  return static_cast<int>(n);
}

SetExpr parse_expr(detail::TextCursor& cur) {
  cur.skip_space();
  int l = cur.line(), c = cur.column();
  std::string id = cur.identifier();
  SetExpr e;
  cur.expect('(');
  if (id == "interval") {
    e.kind = SetExpr::Kind::Interval;
    e.lo = cur.rational();
    cur.expect(',');
    e.hi = cur.rational();
  } else if (id == "levels") {
    e.kind = SetExpr::Kind::Levels;
    e.stage = parse_stage(cur);
    cur.expect(',');
    if (cur.accept('[')) {
      if (!cur.accept(']')) {
        do {
          e.indices.push_back(cur.integer());
        } while (cur.accept(','));
        cur.expect(']');
      }
    } else {
      std::int64_t from = cur.integer();
      if (!cur.accept("..")) cur.fail("expected '..' or '[' in level list");
      std::int64_t to = cur.integer();
      if (to - from > 10'000'000) cur.fail("level range too large");
      for (std::int64_t i = from; i <= to; ++i) e.indices.push_back(i);
    }
    std::sort(e.indices.begin(), e.indices.end());
    e.indices.erase(std::unique(e.indices.begin(), e.indices.end()), e.indices.end());
  } else if (id == "base" || id == "pool") {
    e.kind = id == "base" ? SetExpr::Kind::Base : SetExpr::Kind::Pool;
    e.stage = parse_stage(cur);
  } else if (id == "union" || id == "intersect" || id == "difference") {
    e.kind = id == "union"       ? SetExpr::Kind::Union
             : id == "intersect" ? SetExpr::Kind::Intersect
                                 : SetExpr::Kind::Difference;
    e.children.push_back(parse_expr(cur));
    cur.expect(',');
    e.children.push_back(parse_expr(cur));
  } else if (id == "complement") {
    e.kind = SetExpr::Kind::Complement;
    e.children.push_back(parse_expr(cur));
  } else {
    throw ParseError("unknown set constructor '" + id + "'", l, c);
  }
  cur.expect(')');
  return e;
}

}  // namespace

SetExpr parse_set_expr(std::string_view text) {
  detail::TextCursor cur(text);
  SetExpr e = parse_expr(cur);
  cur.skip_space();
  if (!cur.done()) cur.fail("trailing text after set expression");
  return e;
}

std::string to_string(const SetExpr& e) {
  using K = SetExpr::Kind;
  switch (e.kind) {
    case K::Interval:
      return "interval(" + to_string(e.lo) + "," + to_string(e.hi) + ")";
    case K::Levels: {
      std::string s = "levels(" + std::to_string(e.stage) + ",[";
      for (std::size_t i = 0; i < e.indices.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(e.indices[i]);
      }
      return s + "])";
    }
    case K::Base:
      return "base(" + std::to_string(e.stage) + ")";
    case K::Pool:
      return "pool(" + std::to_string(e.stage) + ")";
    case K::Union:
      return "union(" + to_string(e.children[0]) + "," + to_string(e.children[1]) + ")";
    case K::Intersect:
      return "intersect(" + to_string(e.children[0]) + "," + to_string(e.children[1]) + ")";
    case K::Difference:
      return "difference(" + to_string(e.children[0]) + "," + to_string(e.children[1]) + ")";
    case K::Complement:
      return "complement(" + to_string(e.children[0]) + ")";
  }
  return {};
}

}  // namespace rankone
