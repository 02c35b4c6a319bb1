#include "reel/engine/core.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

namespace reel {

GopLayout::GopLayout(std::vector<std::vector<GopEntry>> per_source)
    : sources_(std::move(per_source)) {}

GopRef GopLayout::gop_of(FrameKey key) const {
  const auto src = key_source(key);
  const auto frame = key_frame(key);
  if (src >= sources_.size()) throw std::out_of_range("unknown source ordinal " + std::to_string(src));
  const auto& gops = sources_[src];
  auto it = std::upper_bound(gops.begin(), gops.end(), frame, [](std::uint32_t f, const GopEntry& g) {
    return f < g.first_presentation_index;
  });
  if (it == gops.begin()) throw std::out_of_range("frame " + std::to_string(frame) + " not in any GOP");
  --it;
  if (frame >= it->first_presentation_index + it->frames_in_gop)
    throw std::out_of_range("frame " + std::to_string(frame) + " past the end of the source");
  return GopRef{src, static_cast<std::uint32_t>(it - gops.begin()), it->first_presentation_index,
                it->frames_in_gop};
}

RenderCore::RenderCore(std::vector<std::vector<FrameKey>> schedule, GopLayout layout,
                       CoreLimits limits)
    : schedule_(std::move(schedule)),
      layout_(std::move(layout)),
      limits_(limits),
      state_(schedule_.size(), GenState::Unplanned),
      missing_(schedule_.size(), 0),
      slots_(limits.decoders) {
  if (limits_.pool_capacity == 0 || limits_.prefetch_window == 0 || limits_.reorder_capacity == 0 ||
      limits_.decoders == 0)
    throw std::invalid_argument("engine limits must be positive");
  for (std::uint32_t g = 0; g < schedule_.size(); ++g) {
    if (schedule_[g].size() > limits_.pool_capacity)
      throw std::invalid_argument("gen " + std::to_string(g) + " reads " +
                                  std::to_string(schedule_[g].size()) +
                                  " frames but the pool holds " +
                                  std::to_string(limits_.pool_capacity));
    for (const FrameKey k : schedule_[g]) keys_[k].uses.push_back(g);
  }
}

RenderCore::KeyInfo* RenderCore::find(FrameKey k) {
  auto it = keys_.find(k);
  return it == keys_.end() ? nullptr : &it->second;
}

const RenderCore::KeyInfo* RenderCore::find(FrameKey k) const {
  auto it = keys_.find(k);
  return it == keys_.end() ? nullptr : &it->second;
}

bool RenderCore::in_need_set(FrameKey k) const {
  const auto* info = find(k);
  return info && info->need_count > 0;
}

std::uint64_t RenderCore::next_needed_gen(FrameKey k) const {
  const auto* info = find(k);
  return info ? nng(*info) : kNever;
}

bool RenderCore::pooled(FrameKey k) const {
  const auto* info = find(k);
  return info && info->frame;
}

RasterPtr RenderCore::pooled_frame(FrameKey k) const {
  const auto* info = find(k);
  return info ? info->frame : nullptr;
}

std::vector<FrameKey> RenderCore::pool_keys() const {
  std::vector<FrameKey> out;
  for (const auto& [n, k] : evict_order_) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

void RenderCore::note_sizes() {
  counters_.max_pool_size = std::max<std::uint64_t>(counters_.max_pool_size, pool_size_);
  counters_.max_need_set = std::max<std::uint64_t>(counters_.max_need_set, need_keys_.size());
  counters_.max_reorder = std::max<std::uint64_t>(counters_.max_reorder, results_.size());
}

void RenderCore::plan() {
  while (next_unplanned_ < gen_count()) {
    const std::size_t active = next_unplanned_ - done_upto_;
    if (active >= limits_.prefetch_window) break;
    const std::uint32_t g = next_unplanned_;
    std::size_t added = 0;
    for (const FrameKey k : schedule_[g])
      if (keys_.at(k).need_count == 0) ++added;
    if (active > 0 && need_keys_.size() + added > limits_.pool_capacity) break;
    std::uint32_t missing = 0;
    for (const FrameKey k : schedule_[g]) {
      auto& info = keys_.at(k);
      if (info.need_count++ == 0) need_keys_.insert(k);
      if (!info.frame) ++missing;
    }
    missing_[g] = missing;
    if (missing == 0) {
      state_[g] = GenState::Ready;
      ready_.insert(g);
    } else {
      state_[g] = GenState::Waiting;
    }
    ++next_unplanned_;
  }
  note_sizes();
}

void RenderCore::evict(FrameKey k, KeyInfo& info) {
  assert(info.need_count == 0);
  evict_order_.erase({nng(info), k});
  info.frame.reset();
  --pool_size_;
}

InsertResult RenderCore::pool_insert(FrameKey k, RasterPtr frame) {
  auto* info = find(k);
  if (!info) {
    ++counters_.pool_drops;
    return InsertResult::Dropped;
  }
  if (info->frame) return InsertResult::AlreadyPooled;
  const std::uint64_t n = nng(*info);
  if (n == kNever) {
    ++counters_.pool_drops;
    return InsertResult::Dropped;
  }
  const bool forced = info->need_count > 0;
  if (pool_size_ >= limits_.pool_capacity) {
    const auto victim = *evict_order_.rbegin();
    if (!forced && victim.first <= n) {
      ++counters_.pool_drops;
      return InsertResult::Dropped;
    }
    auto& vinfo = keys_.at(victim.second);
    if (vinfo.need_count > 0)
      throw std::logic_error("decode pool holds only NeedSet frames; the planner let it overflow");
    evict(victim.second, vinfo);
    ++counters_.evictions;
  }
  info->frame = std::move(frame);
  evict_order_.insert({n, k});
  ++pool_size_;
  ++counters_.pool_inserts;
  if (forced) {
    for (std::size_t u = info->cursor; u < info->uses.size(); ++u) {
      const std::uint32_t g = info->uses[u];
      if (g >= next_unplanned_) break;
      if (state_[g] != GenState::Waiting) continue;
      if (--missing_[g] == 0) {
        state_[g] = GenState::Ready;
        ready_.insert(g);
      }
    }
  }
  note_sizes();
  return InsertResult::Inserted;
}

std::optional<FrameKey> RenderCore::best_candidate() const {
  std::optional<FrameKey> best;
  std::uint64_t best_nng = kNever;
  for (const FrameKey k : need_keys_) {
    const auto& info = keys_.at(k);
    if (info.frame || info.in_future > 0) continue;
    const auto n = nng(info);
    if (!best || n < best_nng) {
      best = k;
      best_nng = n;
    }
  }
  return best;
}

std::vector<std::pair<std::uint32_t, GopRef>> RenderCore::assign_decoders() {
  std::vector<std::pair<std::uint32_t, GopRef>> out;
  for (std::uint32_t i = 0; i < slots_.size(); ++i) {
    auto& s = slots_[i];
    if (s.assigned) continue;
    const auto cand = best_candidate();
    if (!cand) break;
    const GopRef gop = layout_.gop_of(*cand);
    s.assigned = true;
    s.gop = gop;
    s.stalled = false;
    ++s.epoch;
    s.future.clear();
    for (std::uint32_t f = gop.first; f < gop.first + gop.count; ++f) {
      s.future.insert(s.future.end(), f);
      if (auto* info = find(make_key(gop.source, f))) ++info->in_future;
    }
    ++counters_.gop_assignments;
    out.emplace_back(i, gop);
  }
  return out;
}

void RenderCore::release_slot(DecoderSlot& s) {
  for (const auto f : s.future)
    if (auto* info = find(make_key(s.gop.source, f))) --info->in_future;
  s.future.clear();
  s.assigned = false;
  s.stalled = false;
}

std::uint64_t RenderCore::soonest_needed(std::uint32_t i) const {
  const auto& s = slots_[i];
  std::uint64_t best = kNever;
  for (const auto f : s.future) {
    const auto* info = find(make_key(s.gop.source, f));
    if (!info || info->frame) continue;
    best = std::min(best, nng(*info));
  }
  return best;
}

bool RenderCore::should_abandon(std::uint32_t i) const {
  const std::uint64_t mine = soonest_needed(i);
  const auto cand = best_candidate();
  if (!cand || !(next_needed_gen(*cand) < mine)) return false;
  for (std::uint32_t j = 0; j < slots_.size(); ++j) {
    if (j == i || !slots_[j].assigned) continue;
    if (soonest_needed(j) > mine) return false;
  }
  return true;
}

DecoderAction RenderCore::decide_decoder(std::uint32_t i) {
  auto& s = slots_[i];
  if (!s.assigned) return DecoderAction::Idle;
  if (s.future.empty()) {
    release_slot(s);
    return DecoderAction::Finished;
  }
  for (const auto f : s.future) {
    const auto* info = find(make_key(s.gop.source, f));
    if (info && info->need_count > 0 && !info->frame) {
      s.stalled = false;
      return DecoderAction::Step;
    }
  }
  if (!s.stalled) {
    s.stalled = true;
    ++counters_.stalls;
  }
  if (should_abandon(i)) {
    release_slot(s);
    ++counters_.abandonments;
    return DecoderAction::Abandoned;
  }
  return DecoderAction::Stalled;
}

void RenderCore::commit_decoded(std::uint32_t i, std::uint32_t presentation_index,
                                RasterPtr frame) {
  auto& s = slots_[i];
  if (!s.assigned || s.future.erase(presentation_index) == 0)
    throw std::logic_error("decoder slot " + std::to_string(i) + " produced unexpected frame " +
                           std::to_string(presentation_index));
  const FrameKey k = make_key(s.gop.source, presentation_index);
  if (auto* info = find(k)) --info->in_future;
  ++counters_.frames_decoded;
  pool_insert(k, std::move(frame));
}

std::optional<std::uint32_t> RenderCore::take_ready() {
  if (ready_.empty()) return std::nullopt;
  const std::uint32_t g = *ready_.begin();
  if (results_.size() + inflight_ >= limits_.reorder_capacity && g != done_upto_)
    return std::nullopt;
  ready_.erase(ready_.begin());
  state_[g] = GenState::Running;
  ++inflight_;
  return g;
}

std::vector<std::pair<FrameKey, RasterPtr>> RenderCore::inputs(std::uint32_t g) const {
  std::vector<std::pair<FrameKey, RasterPtr>> out;
  out.reserve(schedule_[g].size());
  for (const FrameKey k : schedule_[g]) out.emplace_back(k, keys_.at(k).frame);
  return out;
}

void RenderCore::commit_result(std::uint32_t g, RasterPtr frame) {
  if (state_[g] != GenState::Running) throw std::logic_error("result for a gen that is not running");
  state_[g] = GenState::Evaluated;
  --inflight_;
  results_.emplace(g, std::move(frame));
  ++counters_.frames_evaluated;
  note_sizes();
}

std::optional<RasterPtr> RenderCore::take_output() {
  if (sinking_ || finished()) return std::nullopt;
  auto it = results_.find(done_upto_);
  if (it == results_.end()) return std::nullopt;
  RasterPtr out = std::move(it->second);
  results_.erase(it);
  sinking_ = true;
  return out;
}

void RenderCore::complete_output() {
  if (!sinking_) throw std::logic_error("complete_output without take_output");
  sinking_ = false;
  const std::uint32_t g = done_upto_;
  state_[g] = GenState::Done;
  for (const FrameKey k : schedule_[g]) {
    auto& info = keys_.at(k);
    if (--info.need_count == 0) need_keys_.erase(k);
  }
  ++done_upto_;
  for (const FrameKey k : schedule_[g]) {
    auto& info = keys_.at(k);
    const std::uint64_t before = nng(info);
    while (info.cursor < info.uses.size() && info.uses[info.cursor] < done_upto_) ++info.cursor;
    if (!info.frame) continue;
    evict_order_.erase({before, k});
    const std::uint64_t after = nng(info);
    if (after == kNever) {
      info.frame.reset();
      --pool_size_;
    } else {
      evict_order_.insert({after, k});
    }
  }
  plan();
}

}  // namespace reel
