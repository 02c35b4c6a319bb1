#include "reel/ir/video_spec.hpp"

#include <stdexcept>

namespace reel {

void VideoSpec::append_frame(NodeId id) {
  if (terminated) throw std::logic_error("spec " + spec_id + " is terminated");
  if (!nodes.contains(id)) throw ExprError("frame root " + std::to_string(id.v) + " out of range");
  frames.push_back(id);
}

VideoSpec slice_spec(const VideoSpec& spec, std::size_t first, std::size_t last) {
  if (first > last || last > spec.frames.size())
    throw std::out_of_range("slice [" + std::to_string(first) + ", " + std::to_string(last) +
                            ") outside spec of " + std::to_string(spec.frames.size()) + " frames");
  VideoSpec out;
  out.spec_id = spec.spec_id;
  out.fps_num = spec.fps_num;
  out.fps_den = spec.fps_den;
  out.output_type = spec.output_type;
  std::unordered_map<std::uint32_t, NodeId> memo;
  out.frames.reserve(last - first);
  for (std::size_t g = first; g < last; ++g)
    out.frames.push_back(copy_subtree(spec.nodes, spec.frames[g], out.nodes, memo));
  out.terminated = true;
  return out;
}

}  // namespace reel
