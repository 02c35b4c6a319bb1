#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reel/ir/expr.hpp"
#include "reel/ir/video_spec.hpp"

namespace reel {

/// Sorted, duplicate-free source frames one output frame reads.
using NeedList = std::vector<SourceRef>;

inline bool operator<(const SourceRef& a, const SourceRef& b) {
  if (a.source_id != b.source_id) return a.source_id < b.source_id;
  return a.frame_index < b.frame_index;
}

/// Source frames reachable from `root`.
NeedList source_refs(const NodeTable& table, NodeId root);

/// Entry g is the set of source frames reachable from frames[g], for
/// g in [first, last).
std::vector<NeedList> extract_schedule(const VideoSpec& spec, std::size_t first, std::size_t last);
std::vector<NeedList> extract_schedule(const VideoSpec& spec);

}  // namespace reel
