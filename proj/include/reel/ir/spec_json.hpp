#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reel/ir/video_spec.hpp"

namespace reel {

/// Malformed spec text. `offset` is the byte offset of a syntax error, or
/// std::string::npos for structural errors found after parsing.
class SpecFormatError : public std::runtime_error {
 public:
  SpecFormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A JSON integer that is >= 0, whether it was parsed as unsigned or built
/// from a signed literal. Anything else gives nullopt.
std::optional<std::uint64_t> json_count(const nlohmann::json& j);

nlohmann::json node_to_json(const ExprNode& node);
nlohmann::json frame_type_to_json(const FrameType& t);
FrameType frame_type_from_json(const nlohmann::json& j);

nlohmann::json nodes_to_json(const NodeTable& table);
/// Interns `nodes_json` into `table` in order, returning the id each local
/// index maps to. Child references must point at earlier local indices.
std::vector<NodeId> intern_json_nodes(const nlohmann::json& nodes_json, NodeTable& table);

std::string serialize_spec(const VideoSpec& spec);
nlohmann::json spec_to_json(const VideoSpec& spec);
VideoSpec deserialize_spec(std::string_view text);
VideoSpec spec_from_json(const nlohmann::json& j);

}  // namespace reel
