#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "reel/ir/value.hpp"

namespace reel {

struct NodeId {
  std::uint32_t v = 0;
  auto operator<=>(const NodeId&) const = default;
};

/// Reference to one decoded frame of a bound source.
struct SourceRef {
  std::string source_id;
  std::uint32_t frame_index = 0;
  bool operator==(const SourceRef&) const = default;
};

using Arg = std::variant<Value, NodeId>;

struct FilterCall {
  std::string filter_name;
  std::vector<Arg> args;
  bool operator==(const FilterCall&) const = default;
};

struct Const {
  Value value;
  bool operator==(const Const&) const = default;
};

using ExprNode = std::variant<SourceRef, FilterCall, Const>;

std::size_t hash_node(const ExprNode& node);

class ExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Append-only, topologically ordered node store. Structurally equal nodes
/// are stored once; child ids always point at earlier entries.
class NodeTable {
 public:
  /// Throws ExprError if a child id is not already in the table.
  NodeId intern(const ExprNode& node);
  NodeId intern(ExprNode&& node);

  const ExprNode& at(NodeId id) const;
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId id) const { return id.v < nodes_.size(); }
  const std::vector<ExprNode>& nodes() const { return nodes_; }

  /// Drops every node appended after the table had `n` entries. Used to undo
  /// a rejected batch of interns.
  void truncate(std::size_t n);

  // Convenience builders.
  NodeId source(std::string source_id, std::uint32_t frame);
  NodeId call(std::string filter, std::vector<Arg> args);
  NodeId constant(Value v);

 private:
  NodeId find_or_insert(ExprNode&& node, std::size_t h);
  void check_children(const ExprNode& node) const;

  std::vector<ExprNode> nodes_;
  std::vector<std::size_t> hashes_;
  std::unordered_multimap<std::size_t, std::uint32_t> index_;
};

/// Copies the sub-DAG rooted at `root` from `from` into `to`, returning the
/// root's id in `to`. `memo` maps already-copied ids and may be reused across
/// calls that share nodes.
NodeId copy_subtree(const NodeTable& from, NodeId root, NodeTable& to,
                    std::unordered_map<std::uint32_t, NodeId>& memo);

}  // namespace reel
