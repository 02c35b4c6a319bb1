#include "reel/ir/expr.hpp"

#include <functional>

namespace reel {

namespace {

inline std::size_t mix(std::size_t seed, std::size_t h) {
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct NodeHasher {
  std::size_t operator()(const SourceRef& s) const {
    return mix(mix(11, std::hash<std::string>{}(s.source_id)), s.frame_index);
  }
  std::size_t operator()(const FilterCall& f) const {
    std::size_t h = mix(12, std::hash<std::string>{}(f.filter_name));
    for (const auto& a : f.args) {
      if (const auto* id = std::get_if<NodeId>(&a))
        h = mix(h, mix(13, id->v));
      else
        h = mix(h, hash_value(std::get<Value>(a)));
    }
    return h;
  }
  std::size_t operator()(const Const& c) const { return mix(14, hash_value(c.value)); }
};

}  // namespace

std::size_t hash_node(const ExprNode& node) { return std::visit(NodeHasher{}, node); }

void NodeTable::check_children(const ExprNode& node) const {
  if (const auto* call = std::get_if<FilterCall>(&node)) {
    for (const auto& a : call->args) {
      if (const auto* id = std::get_if<NodeId>(&a); id && id->v >= nodes_.size())
        throw ExprError("child node id " + std::to_string(id->v) + " out of range (table size " +
                        std::to_string(nodes_.size()) + ")");
    }
  }
}

NodeId NodeTable::find_or_insert(ExprNode&& node, std::size_t h) {
  auto [lo, hi] = index_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    if (nodes_[it->second] == node) return NodeId{it->second};
  }
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(std::move(node));
  hashes_.push_back(h);
  index_.emplace(h, id);
  return NodeId{id};
}

NodeId NodeTable::intern(const ExprNode& node) { return intern(ExprNode(node)); }

NodeId NodeTable::intern(ExprNode&& node) {
  check_children(node);
  const auto h = hash_node(node);
  return find_or_insert(std::move(node), h);
}

const ExprNode& NodeTable::at(NodeId id) const {
  if (id.v >= nodes_.size())
    throw ExprError("node id " + std::to_string(id.v) + " out of range");
  return nodes_[id.v];
}

void NodeTable::truncate(std::size_t n) {
  while (nodes_.size() > n) {
    const auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
    auto [lo, hi] = index_.equal_range(hashes_.back());
    for (auto it = lo; it != hi; ++it) {
      if (it->second == id) {
        index_.erase(it);
        break;
      }
    }
    nodes_.pop_back();
    hashes_.pop_back();
  }
}

NodeId NodeTable::source(std::string source_id, std::uint32_t frame) {
  return intern(SourceRef{std::move(source_id), frame});
}

NodeId NodeTable::call(std::string filter, std::vector<Arg> args) {
  return intern(FilterCall{std::move(filter), std::move(args)});
}

NodeId NodeTable::constant(Value v) { return intern(Const{std::move(v)}); }

NodeId copy_subtree(const NodeTable& from, NodeId root, NodeTable& to,
                    std::unordered_map<std::uint32_t, NodeId>& memo) {
  if (auto it = memo.find(root.v); it != memo.end()) return it->second;
  const ExprNode& node = from.at(root);
  NodeId out;
  if (const auto* call = std::get_if<FilterCall>(&node)) {
    FilterCall copy{call->filter_name, {}};
    copy.args.reserve(call->args.size());
    for (const auto& a : call->args) {
      if (const auto* id = std::get_if<NodeId>(&a))
        copy.args.emplace_back(copy_subtree(from, *id, to, memo));
      else
        copy.args.push_back(a);
    }
    out = to.intern(std::move(copy));
  } else {
    out = to.intern(node);
  }
  memo.emplace(root.v, out);
  return out;
}

}  // namespace reel
