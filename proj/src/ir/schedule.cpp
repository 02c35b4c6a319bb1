#include "reel/ir/schedule.hpp"

#include <algorithm>
#include <unordered_set>

namespace reel {

NeedList source_refs(const NodeTable& table, NodeId root) {
  NeedList out;
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{root.v};
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    const ExprNode& node = table.at(NodeId{id});
    if (const auto* src = std::get_if<SourceRef>(&node)) {
      out.push_back(*src);
    } else if (const auto* call = std::get_if<FilterCall>(&node)) {
      for (const auto& a : call->args)
        if (const auto* c = std::get_if<NodeId>(&a)) stack.push_back(c->v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NeedList> extract_schedule(const VideoSpec& spec, std::size_t first, std::size_t last) {
  std::vector<NeedList> out;
  out.reserve(last - first);
  for (std::size_t g = first; g < last; ++g) out.push_back(source_refs(spec.nodes, spec.frames.at(g)));
  return out;
}

std::vector<NeedList> extract_schedule(const VideoSpec& spec) {
  return extract_schedule(spec, 0, spec.frames.size());
}

}  // namespace reel
