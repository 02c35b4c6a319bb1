#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <string>

#include "reel/codec/tvc.hpp"
#include "reel/engine/config.hpp"
#include "reel/engine/sink.hpp"
#include "reel/engine/stats.hpp"
#include "reel/ir/video_spec.hpp"

namespace reel {

using SourceMap = std::map<std::string, VideoSourcePtr, std::less<>>;

/// Output frames [first, last) of a spec. `last` is clamped to the spec length.
struct RenderRange {
  std::size_t first = 0;
  std::size_t last = std::numeric_limits<std::size_t>::max();
};

/// Checks every frame in the range: sources bound, frame indices in range,
/// and the expression type-checks to the spec's output type. Throws
/// RenderError naming the first bad gen.
void validate_render(const VideoSpec& spec, const SourceMap& sources, RenderRange range = {});

/// Renders through the scheduled engine. The sink sees begin, then every
/// frame of the range in order, then end.
RenderStats render(const VideoSpec& spec, const SourceMap& sources, const EngineConfig& config,
                   FrameSink& sink, RenderRange range = {});

/// Single-threaded oracle: each frame expression evaluated in turn, every
/// source frame decoded from the start of its GOP. No pooling.
RenderStats reference_render(const VideoSpec& spec, const SourceMap& sources, FrameSink& sink,
                             RenderRange range = {});

}  // namespace reel
