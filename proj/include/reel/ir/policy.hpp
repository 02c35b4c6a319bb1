#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "reel/ir/expr.hpp"
#include "reel/ir/typecheck.hpp"

namespace reel {

/// Static limits applied to pushed expressions.
struct SecurityPolicy {
  std::uint32_t max_intermediate_width = 8192;
  std::uint32_t max_intermediate_height = 8192;
  std::size_t max_value_bytes = 65536;
  std::uint32_t max_expr_depth = 64;

  /// Throws std::invalid_argument unless every limit is positive.
  void validate() const;
};

enum class PolicyLimit { Resolution, ValueSize, Depth };

const char* policy_limit_name(PolicyLimit l);

struct PolicyViolation {
  NodeId node;
  PolicyLimit limit;
  std::string detail;
};

/// Depth is the longest root-to-leaf path counting FilterCall nodes only.
/// Nodes are visited in ascending id order; the first resolution or value
/// size breach wins, then depth is checked at the root. `expr` must already
/// type-check.
std::optional<PolicyViolation> check_policy(const NodeTable& table, NodeId expr,
                                            const SourceTypes& sources,
                                            const SignatureTable& registry,
                                            const SecurityPolicy& policy);

}  // namespace reel
