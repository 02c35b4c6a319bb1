#include "reel/ir/typecheck.hpp"

#include <algorithm>

namespace reel {

const char* param_kind_name(ParamKind k) {
  switch (k) {
    case ParamKind::Frame: return "frame";
    case ParamKind::Int: return "int";
    case ParamKind::Float: return "float";
    case ParamKind::Bool: return "bool";
    case ParamKind::Str: return "str";
    case ParamKind::IntPair: return "pair";
    case ParamKind::Color: return "color";
    case ParamKind::List: return "list";
  }
  return "?";
}

const char* type_error_name(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnknownFilter: return "UnknownFilter";
    case TypeErrorKind::UnknownSource: return "UnknownSource";
    case TypeErrorKind::ArityMismatch: return "ArityMismatch";
    case TypeErrorKind::ArgKindMismatch: return "ArgKindMismatch";
    case TypeErrorKind::FrameTypeMismatch: return "FrameTypeMismatch";
    case TypeErrorKind::InvalidArgument: return "InvalidArgument";
    case TypeErrorKind::NotAFrame: return "NotAFrame";
  }
  return "?";
}

TypeError::TypeError(TypeErrorKind kind, NodeId node, const std::string& detail)
    : std::runtime_error(std::string(type_error_name(kind)) + " at node " +
                         std::to_string(node.v) + ": " + detail),
      kind_(kind),
      node_(node),
      detail_(detail) {}

namespace {

bool value_matches(const Value& v, ParamKind k) {
  switch (k) {
    case ParamKind::Int: return v.is<std::int64_t>();
    case ParamKind::Float: return v.is<double>() || v.is<std::int64_t>();
    case ParamKind::Bool: return v.is<bool>();
    case ParamKind::Str: return v.is<std::string>();
    case ParamKind::IntPair: return v.is<IntPair>();
    case ParamKind::Color: return v.is<Color>();
    case ParamKind::List: return v.is<ValueList>();
    case ParamKind::Frame: return false;
  }
  return false;
}

}  // namespace

TypeChecker::TypeChecker(const NodeTable& table, const SourceTypes& sources,
                         const SignatureTable& registry)
    : table_(table), sources_(sources), registry_(registry) {}

FrameType TypeChecker::check(NodeId root) {
  if (!table_.contains(root))
    throw TypeError(TypeErrorKind::NotAFrame, root, "node id out of range");
  if (memo_.size() < table_.size()) memo_.resize(table_.size());
  // Children always have smaller ids, so filling the memo bottom-up over the
  // reachable set avoids deep recursion on long chains.
  std::vector<std::uint32_t> stack{root.v};
  std::vector<std::uint32_t> order;
  std::vector<bool> seen(root.v + 1, false);
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    if (seen[id] || memo_[id]) continue;
    seen[id] = true;
    order.push_back(id);
    if (const auto* call = std::get_if<FilterCall>(&table_.at(NodeId{id}))) {
      for (const auto& a : call->args)
        if (const auto* c = std::get_if<NodeId>(&a)) stack.push_back(c->v);
    }
  }
  std::sort(order.begin(), order.end());
  for (const auto id : order) {
    if (std::holds_alternative<Const>(table_.at(NodeId{id}))) continue;
    memo_[id] = check_node(NodeId{id});
  }
  if (std::holds_alternative<Const>(table_.at(root)))
    throw TypeError(TypeErrorKind::NotAFrame, root, "expression root is a constant, not a frame");
  return *memo_[root.v];
}

FrameType TypeChecker::check_node(NodeId id) {
  const ExprNode& node = table_.at(id);
  if (const auto* src = std::get_if<SourceRef>(&node)) {
    auto it = sources_.find(src->source_id);
    if (it == sources_.end())
      throw TypeError(TypeErrorKind::UnknownSource, id, "unknown source '" + src->source_id + "'");
    return it->second;
  }
  const auto& call = std::get<FilterCall>(node);
  auto sig_it = registry_.find(call.filter_name);
  if (sig_it == registry_.end())
    throw TypeError(TypeErrorKind::UnknownFilter, id, "unknown filter '" + call.filter_name + "'");
  const FilterSignature& sig = sig_it->second;
  if (call.args.size() != sig.params.size())
    throw TypeError(TypeErrorKind::ArityMismatch, id,
                    call.filter_name + " takes " + std::to_string(sig.params.size()) +
                        " arguments, got " + std::to_string(call.args.size()));
  std::vector<TypedArg> typed;
  typed.reserve(call.args.size());
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    const ParamKind want = sig.params[i];
    const Value* value = nullptr;
    std::optional<FrameType> frame;
    if (const auto* child = std::get_if<NodeId>(&call.args[i])) {
      const ExprNode& c = table_.at(*child);
      if (const auto* k = std::get_if<Const>(&c))
        value = &k->value;
      else
        frame = *memo_[child->v];
    } else {
      value = &std::get<Value>(call.args[i]);
    }
    const std::string where = call.filter_name + " argument " + std::to_string(i);
    if (want == ParamKind::Frame) {
      if (!frame)
        throw TypeError(TypeErrorKind::ArgKindMismatch, id,
                        where + ": expected frame, got " + value->kind_name());
      typed.emplace_back(*frame);
    } else {
      if (!value)
        throw TypeError(TypeErrorKind::ArgKindMismatch, id,
                        where + ": expected " + param_kind_name(want) + ", got frame");
      if (!value_matches(*value, want))
        throw TypeError(TypeErrorKind::ArgKindMismatch, id,
                        where + ": expected " + param_kind_name(want) + ", got " +
                            value->kind_name());
      typed.emplace_back(*value);
    }
  }
  try {
    return sig.derive(typed);
  } catch (const RuleError& e) {
    throw TypeError(e.kind, id, call.filter_name + ": " + e.detail);
  }
}

FrameType type_check(const NodeTable& table, NodeId root, const SourceTypes& sources,
                     const SignatureTable& registry) {
  TypeChecker checker(table, sources, registry);
  return checker.check(root);
}

}  // namespace reel
