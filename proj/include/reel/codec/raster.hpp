#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "reel/ir/types.hpp"

namespace reel {

/// Decoded frame. GRAY8: w*h bytes; RGB8/BGR8: 3*w*h interleaved;
/// YUV420P: Y plane, then U, then V at half resolution. No row padding.
struct Raster {
  FrameType type;
  std::vector<std::uint8_t> data;

  Raster() = default;
  /// Zero-filled raster of type `t`; throws std::invalid_argument if `t` is invalid.
  explicit Raster(FrameType t);
  Raster(FrameType t, std::vector<std::uint8_t> bytes);

  bool operator==(const Raster&) const = default;

  std::uint8_t* plane(int index);
  const std::uint8_t* plane(int index) const;
};

using RasterPtr = std::shared_ptr<const Raster>;

}  // namespace reel
