#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reel/ir/expr.hpp"
#include "reel/ir/types.hpp"

namespace reel {

/// One output frame expression per output index, plus the output format.
struct VideoSpec {
  std::string spec_id;
  std::uint32_t fps_num = 30;
  std::uint32_t fps_den = 1;
  FrameType output_type;
  std::vector<NodeId> frames;
  bool terminated = false;
  NodeTable nodes;

  /// Throws std::logic_error once terminated.
  void append_frame(NodeId id);
  void terminate() { terminated = true; }
};

/// Extracts the frames [first, last) of `spec` into a fresh spec whose table
/// holds only the nodes those frames reach.
VideoSpec slice_spec(const VideoSpec& spec, std::size_t first, std::size_t last);

}  // namespace reel
