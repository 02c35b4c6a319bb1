#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "reel/ir/expr.hpp"
#include "reel/ir/types.hpp"

namespace reel {

enum class ParamKind { Frame, Int, Float, Bool, Str, IntPair, Color, List };

const char* param_kind_name(ParamKind k);

enum class TypeErrorKind {
  UnknownFilter,
  UnknownSource,
  ArityMismatch,
  ArgKindMismatch,
  FrameTypeMismatch,
  InvalidArgument,
  NotAFrame,
};

const char* type_error_name(TypeErrorKind k);

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, NodeId node, const std::string& detail);

  TypeErrorKind kind() const { return kind_; }
  NodeId node() const { return node_; }
  const std::string& detail() const { return detail_; }

 private:
  TypeErrorKind kind_;
  NodeId node_;
  std::string detail_;
};

/// An argument as seen by a type rule: frame-typed inputs carry their type,
/// constants carry their value.
using TypedArg = std::variant<FrameType, Value>;

/// Thrown by derivation rules; the checker rethrows it as TypeError with the
/// offending node attached.
struct RuleError {
  TypeErrorKind kind;
  std::string detail;
};

struct FilterSignature {
  std::string name;
  std::vector<ParamKind> params;
  /// Output type as a pure function of input types and constant args. Args
  /// already match `params` in count and kind. Throws RuleError.
  std::function<FrameType(std::span<const TypedArg>)> derive;
};

using SignatureTable = std::map<std::string, FilterSignature, std::less<>>;
using SourceTypes = std::map<std::string, FrameType, std::less<>>;

/// Memoizing checker over one node table. Nodes shared across many frame
/// expressions are checked once.
class TypeChecker {
 public:
  TypeChecker(const NodeTable& table, const SourceTypes& sources, const SignatureTable& registry);

  /// Frame type of `root`; throws TypeError.
  FrameType check(NodeId root);

 private:
  FrameType check_node(NodeId id);

  const NodeTable& table_;
  const SourceTypes& sources_;
  const SignatureTable& registry_;
  std::vector<std::optional<FrameType>> memo_;
};

FrameType type_check(const NodeTable& table, NodeId root, const SourceTypes& sources,
                     const SignatureTable& registry);

}  // namespace reel
