#include "rankone/tower.hpp"

#include <algorithm>

#include "rankone/errors.hpp"

namespace rankone {

Stage build_stage(const SchemeSpec& spec, int n, std::int64_t max_levels) {
  if (n < 1) throw ValidationError("stage index must be >= 1");
  Normalization norm = normalize(spec);
  Stage st;
  st.n = 1;
  st.width = norm.base_width;
  st.height = 1;
  st.levels = {{Scalar(0), norm.base_width}};
  Scalar pool_left = norm.base_width;

  for (int m = 1; m < n; ++m) {
    const StageRule& rule = spec.rule_for(m);
    std::int64_t next_height = rule.cuts * st.height + rule.spacer_count();
    if (next_height > max_levels) {
      throw ResourceError("stage " + std::to_string(m + 1) + " has " + std::to_string(next_height) +
                          " levels, above the materialization cap " + std::to_string(max_levels));
    }
    Scalar w = st.width / rule.cuts;
    std::vector<Interval> next;
    next.reserve(static_cast<std::size_t>(next_height));
    for (int j = 0; j < rule.cuts; ++j) {
      for (const auto& lv : st.levels) {
        Scalar lo = lv.lo + j * w;
        next.push_back({lo, lo + w});
      }
      for (std::int64_t s = 0; s < rule.spacers[j]; ++s) {
        next.push_back({pool_left, pool_left + w});
        pool_left += w;
      }
    }
    st.n = m + 1;
    st.width = w;
    st.height = next_height;
    st.levels = std::move(next);
  }
  st.pool = IntervalSet(pool_left, Scalar(1));
  return st;
}

Json stage_to_json(const Stage& stage) {
  Json levels = Json::array();
  for (const auto& lv : stage.levels) levels.push_back(Json::array({to_string(lv.lo), to_string(lv.hi)}));
  return Json{{"n", stage.n},
              {"w", to_string(stage.width)},
              {"h", stage.height},
              {"levels", std::move(levels)},
              {"pool", interval_set_to_json(stage.pool)}};
}

Tower::Tower(SchemeSpec spec, int stage_cap) : spec_(std::move(spec)), cap_(stage_cap) {
  if (cap_ < 1) throw ValidationError("stage cap must be >= 1");
  // Stages whose height would pass kMaxHeight are never built.
  std::int64_t h = 1;
  for (int m = 1; m < cap_; ++m) {
    const StageRule& rule = spec_.rule_for(m);
    std::int64_t spacers = rule.spacer_count();
    if (h > (kMaxHeight - spacers) / rule.cuts) {
      cap_ = m;
      break;
    }
    h = rule.cuts * h + spacers;
  }
  Normalization norm = normalize(spec_);
  stages_.resize(static_cast<std::size_t>(cap_) + 1);
  auto first = std::make_unique<StageInfo>();
  first->width = norm.base_width;
  first->height = 1;
  first->pool_left = norm.base_width;
  stages_[1] = std::move(first);
  built_.store(1, std::memory_order_release);
}

void Tower::ensure(int n) const {
  if (n < 1) throw ValidationError("stage index must be >= 1");
  if (n <= built_.load(std::memory_order_acquire)) return;
  if (n > cap_) {
    throw ResourceError("stage " + std::to_string(n) + " exceeds the stage cap " + std::to_string(cap_));
  }
  std::lock_guard lock(build_mutex_);
  for (int m = built_.load(std::memory_order_relaxed); m < n; ++m) {
    const StageInfo& prev = *stages_[m];
    const StageRule& rule = spec_.rule_for(m);
    std::int64_t spacers = rule.spacer_count();
    if (prev.height > (kMaxHeight - spacers) / rule.cuts) {
      throw ResourceError("stage " + std::to_string(m + 1) + " height exceeds the 2^62 level limit");
    }
    auto next = std::make_unique<StageInfo>();
    next->cuts = rule.cuts;
    next->width = prev.width / rule.cuts;
    next->height = rule.cuts * prev.height + spacers;
    next->pool_left = prev.pool_left + spacers * next->width;
    std::int64_t level = 0, carved = 0;
    for (int j = 0; j < rule.cuts; ++j) {
      next->copy_start.push_back(level);
      next->spacer_before.push_back(carved);
      level += prev.height + rule.spacers[j];
      carved += rule.spacers[j];
    }
    next->spacer_before.push_back(carved);
    stages_[m + 1] = std::move(next);
    built_.store(m + 1, std::memory_order_release);
  }
}

const Tower::StageInfo& Tower::info(int n) const {
  ensure(n);
  return *stages_[n];
}

Tower::Origin Tower::origin(int n, std::int64_t level) const {
  const StageInfo& st = info(n);
  if (n < 2 || level < 0 || level >= st.height) throw ValidationError("no such level to decode");
  auto it = std::upper_bound(st.copy_start.begin(), st.copy_start.end(), level);
  int j = static_cast<int>(it - st.copy_start.begin()) - 1;
  std::int64_t t = level - st.copy_start[j];
  std::int64_t parent_height = stages_[n - 1]->height;
  Origin o;
  o.copy = j;
  if (t < parent_height) {
    o.parent_level = t;
  } else {
    o.spacer = true;
    o.spacer_ordinal = st.spacer_before[j] + (t - parent_height);
  }
  return o;
}

std::int64_t Tower::copy_level(int n, int copy, std::int64_t parent_level) const {
  return info(n).copy_start[copy] + parent_level;
}

std::int64_t Tower::spacer_level(int n, std::int64_t ordinal) const {
  const StageInfo& st = info(n);
  auto it = std::upper_bound(st.spacer_before.begin(), st.spacer_before.end(), ordinal);
  int j = static_cast<int>(it - st.spacer_before.begin()) - 1;
  return st.copy_start[j] + stages_[n - 1]->height + (ordinal - st.spacer_before[j]);
}

Scalar Tower::spacer_left(int n, std::int64_t ordinal) const {
  return info(n - 1).pool_left + ordinal * info(n).width;
}

std::int64_t Tower::spacer_total(int n) const { return info(n).spacer_before.back(); }

int Tower::cuts_into(int n) const { return info(n).cuts; }

Scalar Tower::level_left(int n, std::int64_t level) const {
  if (level < 0 || level >= height(n)) {
    throw ValidationError("level " + std::to_string(level) + " outside stage " + std::to_string(n));
  }
  Scalar left = 0;
  while (n > 1) {
    Origin o = origin(n, level);
    if (o.spacer) return left + spacer_left(n, o.spacer_ordinal);
    left += o.copy * width(n);
    level = o.parent_level;
    --n;
  }
  return left;
}

Interval Tower::level_interval(int n, std::int64_t level) const {
  Scalar lo = level_left(n, level);
  Scalar hi = lo + width(n);
  return {std::move(lo), std::move(hi)};
}

Tower::Location Tower::locate(const Scalar& x, int n) const {
  if (x < 0 || x >= 1) throw ValidationError("point " + to_string(x) + " outside [0,1)");
  ensure(n);
  Location loc{-1, Scalar(0)};
  if (x < width(1)) loc = {0, x};
  for (int m = 1; m < n; ++m) {
    const Scalar& w = width(m + 1);
    if (loc.level >= 0) {
      std::int64_t j = floor_to_int(loc.offset / w);
      loc.level = copy_level(m + 1, static_cast<int>(j), loc.level);
      loc.offset -= j * w;
    } else if (x < pool_left(m + 1)) {
      std::int64_t ordinal = floor_to_int((x - pool_left(m)) / w);
      loc.level = spacer_level(m + 1, ordinal);
      loc.offset = x - spacer_left(m + 1, ordinal);
    }
  }
  return loc;
}

}  // namespace rankone
