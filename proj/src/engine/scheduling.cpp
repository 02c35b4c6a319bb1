#include "reel/engine/scheduling.hpp"

#include <algorithm>

namespace reel {

std::set<SourceRef> need_set(const std::set<std::uint32_t>& active,
                             const std::vector<NeedList>& schedule) {
  std::set<SourceRef> out;
  for (const auto g : active) out.insert(schedule.at(g).begin(), schedule.at(g).end());
  return out;
}

std::uint64_t next_needed_gen(const SourceRef& frame, const std::set<std::uint32_t>& not_done,
                              const std::vector<NeedList>& schedule) {
  for (const auto g : not_done) {
    const auto& needs = schedule.at(g);
    if (std::find(needs.begin(), needs.end(), frame) != needs.end()) return g;
  }
  return kNever;
}

std::set<std::uint32_t> plan_generations(std::set<std::uint32_t> active, std::uint32_t next_unplanned,
                                         const std::vector<NeedList>& schedule,
                                         std::size_t pool_capacity, std::size_t window) {
  auto needs = need_set(active, schedule);
  for (std::uint32_t g = next_unplanned; g < schedule.size(); ++g) {
    if (active.size() >= window) break;
    auto grown = needs;
    grown.insert(schedule[g].begin(), schedule[g].end());
    if (!active.empty() && grown.size() > pool_capacity) break;
    active.insert(g);
    needs = std::move(grown);
  }
  return active;
}

}  // namespace reel
