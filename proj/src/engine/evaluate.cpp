#include "reel/engine/evaluate.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>
#include <vector>

#include "reel/filters/registry.hpp"

namespace reel {

RasterPtr evaluate(const NodeTable& table, NodeId root, const SourceLookup& lookup) {
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> stack{root.v};
  std::unordered_map<std::uint32_t, RasterPtr> memo;
  std::vector<bool> seen(root.v + 1, false);
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    if (seen[id]) continue;
    seen[id] = true;
    order.push_back(id);
    if (const auto* call = std::get_if<FilterCall>(&table.at(NodeId{id})))
      for (const auto& a : call->args)
        if (const auto* c = std::get_if<NodeId>(&a)) stack.push_back(c->v);
  }
  std::sort(order.begin(), order.end());

  std::vector<filters::EvalArg> args;
  for (const auto id : order) {
    const ExprNode& node = table.at(NodeId{id});
    if (const auto* src = std::get_if<SourceRef>(&node)) {
      memo[id] = lookup(*src);
      continue;
    }
    const auto* call = std::get_if<FilterCall>(&node);
    if (!call) continue;
    args.clear();
    for (const auto& a : call->args) {
      if (const auto* v = std::get_if<Value>(&a)) {
        args.emplace_back(*v);
        continue;
      }
      const auto child = std::get<NodeId>(a);
      if (const auto* k = std::get_if<Const>(&table.at(child)))
        args.emplace_back(k->value);
      else
        args.emplace_back(memo.at(child.v));
    }
    memo[id] = std::make_shared<const Raster>(filters::apply_filter(call->filter_name, args));
  }
  if (std::holds_alternative<Const>(table.at(root)))
    throw std::invalid_argument("expression root is a constant, not a frame");
  return memo.at(root.v);
}

}  // namespace reel
