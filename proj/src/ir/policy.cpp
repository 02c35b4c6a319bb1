#include "reel/ir/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace reel {

void SecurityPolicy::validate() const {
  if (max_intermediate_width == 0 || max_intermediate_height == 0 || max_value_bytes == 0 ||
      max_expr_depth == 0)
    throw std::invalid_argument("security policy limits must be positive");
}

const char* policy_limit_name(PolicyLimit l) {
  switch (l) {
    case PolicyLimit::Resolution: return "resolution";
    case PolicyLimit::ValueSize: return "value_size";
    case PolicyLimit::Depth: return "depth";
  }
  return "?";
}

std::optional<PolicyViolation> check_policy(const NodeTable& table, NodeId expr,
                                            const SourceTypes& sources,
                                            const SignatureTable& registry,
                                            const SecurityPolicy& policy) {
  // Collect the reachable set.
  std::vector<bool> reach(expr.v + 1, false);
  std::vector<std::uint32_t> stack{expr.v};
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    if (reach[id]) continue;
    reach[id] = true;
    if (const auto* call = std::get_if<FilterCall>(&table.at(NodeId{id})))
      for (const auto& a : call->args)
        if (const auto* c = std::get_if<NodeId>(&a)) stack.push_back(c->v);
  }

  TypeChecker checker(table, sources, registry);
  std::vector<std::uint32_t> depth(expr.v + 1, 0);
  for (std::uint32_t id = 0; id <= expr.v; ++id) {
    if (!reach[id]) continue;
    const ExprNode& node = table.at(NodeId{id});
    auto check_value = [&](const Value& v) -> std::optional<PolicyViolation> {
      const auto n = serialized_size(v);
      if (n > policy.max_value_bytes)
        return PolicyViolation{NodeId{id}, PolicyLimit::ValueSize,
                               "constant of " + std::to_string(n) + " bytes exceeds limit " +
                                   std::to_string(policy.max_value_bytes)};
      return std::nullopt;
    };
    if (const auto* k = std::get_if<Const>(&node)) {
      if (auto v = check_value(k->value)) return v;
      continue;
    }
    const FrameType t = checker.check(NodeId{id});
    if (t.width > policy.max_intermediate_width || t.height > policy.max_intermediate_height)
      return PolicyViolation{NodeId{id}, PolicyLimit::Resolution,
                             "intermediate frame " + t.to_string() + " exceeds " +
                                 std::to_string(policy.max_intermediate_width) + "x" +
                                 std::to_string(policy.max_intermediate_height)};
    if (const auto* call = std::get_if<FilterCall>(&node)) {
      std::uint32_t d = 0;
      for (const auto& a : call->args) {
        if (const auto* c = std::get_if<NodeId>(&a))
          d = std::max(d, depth[c->v]);
        else if (auto v = check_value(std::get<Value>(a)))
          return v;
      }
      depth[id] = d + 1;
    }
  }
  if (depth[expr.v] > policy.max_expr_depth)
    return PolicyViolation{expr, PolicyLimit::Depth,
                           "expression depth " + std::to_string(depth[expr.v]) +
                               " exceeds limit " + std::to_string(policy.max_expr_depth)};
  return std::nullopt;
}

}  // namespace reel
