#pragma once

#include <stdexcept>
#include <string_view>

#include "reel/codec/raster.hpp"
#include "reel/ir/value.hpp"

namespace reel::filters {

// Every filter returns a new frame and leaves its inputs untouched.
// Drawing filters accept GRAY8/RGB8/BGR8 only; coordinates are integer
// pixels with the origin at the top-left and drawing clips to the frame.

class FilterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Paints pixels of the closed rectangle spanned by pt1/pt2 whose distance to
/// the nearest rectangle edge is below `thickness` (the border grows inward).
/// thickness -1 fills.
Raster draw_rectangle(const Raster& frame, IntPair pt1, IntPair pt2, Color color,
                      std::int64_t thickness);

/// 5x7 bitmap text. `org` is the bottom-left corner of the first glyph cell;
/// glyphs advance 6*scale pixels. Characters outside 32..126 render as '?'.
Raster draw_text(const Raster& frame, std::string_view text, IntPair org, std::int64_t scale,
                 Color color);

Raster crop(const Raster& frame, std::int64_t x, std::int64_t y, std::int64_t w, std::int64_t h);

/// Output (x, y) samples input (floor(x*w_in/w_out), floor(y*h_in/h_out)),
/// per plane for YUV420P.
Raster scale_nearest(const Raster& frame, std::int64_t w, std::int64_t h);

Raster hstack(const Raster& left, const Raster& right);
Raster vstack(const Raster& top, const Raster& bottom);

/// Where mask > 0: out = (alpha*color + (255-alpha)*in + 127) / 255.
Raster overlay_mask(const Raster& frame, const Raster& mask, Color color, std::int64_t alpha);

/// Constant frame. GRAY8 uses the first color byte; YUV420P takes the color
/// as (Y, U, V).
Raster solid(std::int64_t width, std::int64_t height, PixelFormat fmt, Color color);

Raster pixfmt(const Raster& frame, PixelFormat from, PixelFormat to);

}  // namespace reel::filters
