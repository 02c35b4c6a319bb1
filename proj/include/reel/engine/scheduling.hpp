#pragma once

// Set-level definitions of the planner rules, written directly from their
// definitions. RenderCore keeps incremental versions of the same quantities;
// these are the slow, obvious forms used to cross-check it.

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

#include "reel/engine/core.hpp"
#include "reel/ir/schedule.hpp"

namespace reel {

/// Union of schedule[g] over the active gens.
std::set<SourceRef> need_set(const std::set<std::uint32_t>& active,
                             const std::vector<NeedList>& schedule);

/// Smallest not-done gen whose schedule contains `frame`, or kNever.
std::uint64_t next_needed_gen(const SourceRef& frame, const std::set<std::uint32_t>& not_done,
                              const std::vector<NeedList>& schedule);

/// Adds gens in index order, starting after the highest active or done gen,
/// while the active count stays within `window` and the NeedSet within
/// `pool_capacity`. An empty active set always admits one gen.
std::set<std::uint32_t> plan_generations(std::set<std::uint32_t> active, std::uint32_t next_unplanned,
                                         const std::vector<NeedList>& schedule,
                                         std::size_t pool_capacity, std::size_t window);

}  // namespace reel
