#pragma once

// Scheduling state of one render. RenderCore is a single-threaded state
// machine; runners call it under their own lock and do decode/filter/sink
// work outside it.
//
// Generations are output frames numbered 0..N-1 relative to the request.
// Because the sink consumes in order, Done gens are always the prefix
// [0, done_upto) and the active gens are [done_upto, next_unplanned).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "reel/codec/raster.hpp"
#include "reel/codec/tvc.hpp"

namespace reel {

/// (source ordinal, frame index) packed so that key order is the
/// lexicographic (source_id, frame_index) order when ordinals follow sorted
/// source ids.
using FrameKey = std::uint64_t;

inline constexpr FrameKey make_key(std::uint32_t source, std::uint32_t frame) {
  return (FrameKey{source} << 32) | frame;
}
inline constexpr std::uint32_t key_source(FrameKey k) { return static_cast<std::uint32_t>(k >> 32); }
inline constexpr std::uint32_t key_frame(FrameKey k) { return static_cast<std::uint32_t>(k); }

/// next_needed_gen of a frame no remaining gen needs.
inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

struct GopRef {
  std::uint32_t source = 0;
  std::uint32_t gop = 0;
  std::uint32_t first = 0;
  std::uint32_t count = 0;
  bool operator==(const GopRef&) const = default;
};

/// GOP boundaries for each source ordinal.
class GopLayout {
 public:
  GopLayout() = default;
  explicit GopLayout(std::vector<std::vector<GopEntry>> per_source);

  /// Throws std::out_of_range for unknown sources or frames.
  GopRef gop_of(FrameKey key) const;
  std::size_t source_count() const { return sources_.size(); }

 private:
  std::vector<std::vector<GopEntry>> sources_;
};

struct CoreLimits {
  std::size_t pool_capacity = 64;
  std::size_t prefetch_window = 32;
  std::size_t reorder_capacity = 32;
  std::uint32_t decoders = 1;
};

struct CoreCounters {
  std::uint64_t frames_decoded = 0;
  std::uint64_t frames_evaluated = 0;
  std::uint64_t evictions = 0;
  std::uint64_t abandonments = 0;
  std::uint64_t stalls = 0;
  std::uint64_t pool_inserts = 0;
  std::uint64_t pool_drops = 0;
  std::uint64_t gop_assignments = 0;
  std::uint64_t max_pool_size = 0;
  std::uint64_t max_need_set = 0;
  std::uint64_t max_reorder = 0;
};

struct DecoderSlot {
  bool assigned = false;
  GopRef gop;
  /// Presentation indices of the assigned GOP not yet decoded.
  std::set<std::uint32_t> future;
  bool stalled = false;
  /// Bumped on every assignment so runners know to open a fresh decoder.
  std::uint64_t epoch = 0;
};

enum class GenState : std::uint8_t { Unplanned, Waiting, Ready, Running, Evaluated, Done };
enum class InsertResult { Inserted, AlreadyPooled, Dropped };
enum class DecoderAction { Idle, Step, Finished, Stalled, Abandoned };

class RenderCore {
 public:
  /// `schedule[g]` lists the frames gen g reads, sorted and duplicate-free.
  /// Throws std::invalid_argument if a need set exceeds the pool.
  RenderCore(std::vector<std::vector<FrameKey>> schedule, GopLayout layout, CoreLimits limits);

  std::uint32_t gen_count() const { return static_cast<std::uint32_t>(schedule_.size()); }
  std::uint32_t done_upto() const { return done_upto_; }
  std::uint32_t next_unplanned() const { return next_unplanned_; }
  bool finished() const { return done_upto_ == gen_count(); }
  GenState gen_state(std::uint32_t g) const { return state_[g]; }
  const std::vector<FrameKey>& needs(std::uint32_t g) const { return schedule_[g]; }

  // Planner.

  /// Activates gens in order until the window is full or the next gen's
  /// frames would push the NeedSet past the pool. Always admits one gen when
  /// none is active.
  void plan();
  std::vector<FrameKey> need_set() const { return {need_keys_.begin(), need_keys_.end()}; }
  std::size_t need_set_size() const { return need_keys_.size(); }
  bool in_need_set(FrameKey k) const;
  /// Lowest not-done gen reading `k`, or kNever.
  std::uint64_t next_needed_gen(FrameKey k) const;

  // Decode pool.

  /// Forced when `k` is in the NeedSet: evicts the resident frame with the
  /// largest (next_needed_gen, key). Otherwise inserted only if there is room
  /// or a resident is needed strictly later than `k`; frames no remaining
  /// gen needs are dropped.
  InsertResult pool_insert(FrameKey k, RasterPtr frame);
  bool pooled(FrameKey k) const;
  RasterPtr pooled_frame(FrameKey k) const;
  std::size_t pool_size() const { return pool_size_; }
  std::vector<FrameKey> pool_keys() const;

  // Decoders.

  /// Gives GOPs to idle slots, lowest slot first, for missing NeedSet frames
  /// (not pooled, not in any FutureSet) in (next_needed_gen, key) order.
  std::vector<std::pair<std::uint32_t, GopRef>> assign_decoders();
  /// Decides what slot `i` does next. Finished and Abandoned leave the slot
  /// idle. Step means the runner should decode one record and call
  /// commit_decoded.
  DecoderAction decide_decoder(std::uint32_t i);
  void commit_decoded(std::uint32_t i, std::uint32_t presentation_index, RasterPtr frame);
  const DecoderSlot& slot(std::uint32_t i) const { return slots_[i]; }
  std::uint32_t slot_count() const { return static_cast<std::uint32_t>(slots_.size()); }
  /// Smallest next_needed_gen among the slot's FutureSet frames that are not
  /// pooled, or kNever.
  std::uint64_t soonest_needed(std::uint32_t i) const;
  /// Missing frames: in the NeedSet, not pooled, in no FutureSet.
  std::optional<FrameKey> best_candidate() const;

  // Filters.

  /// Lowest Ready gen, unless the reorder pool is full and that gen is not
  /// the one the sink waits for. Marks it Running.
  std::optional<std::uint32_t> take_ready();
  /// Rasters for every frame gen g reads. Only valid while g is active.
  std::vector<std::pair<FrameKey, RasterPtr>> inputs(std::uint32_t g) const;
  void commit_result(std::uint32_t g, RasterPtr frame);
  std::size_t ready_count() const { return ready_.size(); }
  std::size_t reorder_size() const { return results_.size(); }
  std::size_t inflight() const { return inflight_; }

  // Sink.

  /// Result for gen done_upto, if evaluated and not already taken.
  std::optional<RasterPtr> take_output();
  /// Marks the taken gen Done, releasing its frames, and plans again.
  void complete_output();

  const CoreCounters& counters() const { return counters_; }

 private:
  struct KeyInfo {
    std::vector<std::uint32_t> uses;  // gens reading the key, ascending
    std::uint32_t cursor = 0;         // first use >= done_upto
    std::uint32_t need_count = 0;     // active gens reading the key
    std::uint32_t in_future = 0;      // slots whose FutureSet holds the key
    RasterPtr frame;
  };

  std::uint64_t nng(const KeyInfo& info) const {
    return info.cursor < info.uses.size() ? info.uses[info.cursor] : kNever;
  }
  KeyInfo* find(FrameKey k);
  const KeyInfo* find(FrameKey k) const;
  void evict(FrameKey k, KeyInfo& info);
  void release_slot(DecoderSlot& s);
  bool should_abandon(std::uint32_t i) const;
  void note_sizes();

  std::vector<std::vector<FrameKey>> schedule_;
  GopLayout layout_;
  CoreLimits limits_;
  std::unordered_map<FrameKey, KeyInfo> keys_;

  std::vector<GenState> state_;
  std::vector<std::uint32_t> missing_;
  std::uint32_t done_upto_ = 0;
  std::uint32_t next_unplanned_ = 0;

  std::set<FrameKey> need_keys_;
  std::set<std::pair<std::uint64_t, FrameKey>> evict_order_;
  std::size_t pool_size_ = 0;

  std::vector<DecoderSlot> slots_;

  std::set<std::uint32_t> ready_;
  std::map<std::uint32_t, RasterPtr> results_;
  std::size_t inflight_ = 0;
  bool sinking_ = false;

  CoreCounters counters_;
};

}  // namespace reel
