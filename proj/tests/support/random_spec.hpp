#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reel/ir/video_spec.hpp"

namespace reel::testing {

enum class AccessPattern { Sequential, Reverse, Shuffle, Stride };

const char* pattern_name(AccessPattern p);

struct RandomSource {
  std::string id;
  FrameType type;
  std::uint32_t frames = 0;
  bool is_mask = false;  // gray8 0/255 stream, used only by overlay_mask
};

struct RandomSpecOptions {
  std::uint32_t frames = 100;
  AccessPattern pattern = AccessPattern::Sequential;
  std::uint32_t stride = 2;
  PixelFormat output_pixfmt = PixelFormat::Rgb8;
  std::uint32_t max_ops = 4;
  bool cross_source = true;
  bool masks = true;
};

/// Source frame index for output g under `pattern` over a source of `n` frames.
std::vector<std::uint32_t> access_indices(AccessPattern pattern, std::uint32_t count,
                                          std::uint32_t n, std::uint32_t stride, std::uint64_t seed);

/// A terminated spec whose frames are random filter DAGs over `sources`. All
/// image sources must share one resolution (even width and height); the
/// output has that resolution and `options.output_pixfmt`.
VideoSpec random_spec(std::uint64_t seed, const std::vector<RandomSource>& sources,
                      const RandomSpecOptions& options);

}  // namespace reel::testing
