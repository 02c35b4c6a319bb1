#pragma once

#include <cstdint>
#include <vector>

#include "reel/codec/raster.hpp"
#include "reel/codec/tvc.hpp"

namespace reel {

/// Deterministic fixture content: sample (x, y) of channel c in frame f is
/// (x + 2y + 3f + 37c + seed) mod 256. Interleaved formats use the channel
/// position within the pixel; YUV420P uses the plane index with chroma
/// coordinates for the U/V planes.
Raster synthetic_frame(const FrameType& type, std::uint32_t frame, std::uint32_t seed);

/// TVC container holding synthetic frames 0..frames-1.
std::vector<std::uint8_t> synthetic_stream(const FrameType& type, std::uint32_t frames,
                                           const EncoderParams& params, std::uint32_t seed);

}  // namespace reel
