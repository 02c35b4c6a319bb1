#pragma once

#include <cstdint>

#include "reel/codec/raster.hpp"

namespace reel {

/// Full-range integer conversions, clamped to [0, 255]:
///   Y = (77R + 150G + 29B) >> 8
///   U = ((-43R - 85G + 128B) >> 8) + 128
///   V = ((128R - 107G - 21B) >> 8) + 128
///   R = Y + ((359(V-128)) >> 8)
///   G = Y - ((88(U-128) + 183(V-128)) >> 8)
///   B = Y + ((454(U-128)) >> 8)
/// Chroma subsampling keeps the top-left sample of each 2x2 block and
/// upsampling is nearest. YUV420P <-> GRAY8 moves the luma plane directly
/// (chroma fixed at 128).
///
/// Throws std::invalid_argument for odd dimensions when YUV420P is involved.
Raster convert_pixfmt(const Raster& frame, PixelFormat to);

struct Rgb {
  std::uint8_t r, g, b;
};
struct Yuv {
  std::uint8_t y, u, v;
};

Yuv rgb_to_yuv(Rgb p);
Rgb yuv_to_rgb(Yuv p);

}  // namespace reel
