#include "reel/filters/filters.hpp"

#include <algorithm>
#include <cstring>

#include "reel/codec/pixfmt.hpp"
#include "reel/filters/font5x7.hpp"

namespace reel::filters {

namespace {

void require_drawable(const Raster& frame, const char* who) {
  if (!is_interleaved(frame.type.pixfmt))
    throw FilterError(std::string(who) + " needs gray8/rgb8/bgr8, got " + frame.type.to_string());
}

/// Paints the clipped box [x0, x1) x [y0, y1).
void fill_box(Raster& out, std::int64_t x0, std::int64_t y0, std::int64_t x1, std::int64_t y1,
              const Color& color) {
  const std::int64_t w = out.type.width, h = out.type.height;
  x0 = std::max<std::int64_t>(x0, 0);
  y0 = std::max<std::int64_t>(y0, 0);
  x1 = std::min(x1, w);
  y1 = std::min(y1, h);
  const int ch = channel_count(out.type.pixfmt);
  for (std::int64_t y = y0; y < y1; ++y)
    for (std::int64_t x = x0; x < x1; ++x) {
      std::uint8_t* px = out.data.data() + (y * w + x) * ch;
      for (int c = 0; c < ch; ++c) px[c] = color.c[c];
    }
}

struct Plane {
  const std::uint8_t* data;
  std::uint32_t width;
  std::uint32_t height;
  int channels;
};

struct MutPlane {
  std::uint8_t* data;
  std::uint32_t width;
  std::uint32_t height;
  int channels;
};

std::vector<Plane> planes_of(const Raster& r) {
  const auto& t = r.type;
  if (t.pixfmt == PixelFormat::Yuv420p)
    return {{r.plane(0), t.width, t.height, 1},
            {r.plane(1), t.width / 2, t.height / 2, 1},
            {r.plane(2), t.width / 2, t.height / 2, 1}};
  return {{r.data.data(), t.width, t.height, channel_count(t.pixfmt)}};
}

std::vector<MutPlane> planes_of(Raster& r) {
  std::vector<MutPlane> out;
  for (const auto& p : planes_of(std::as_const(r)))
    out.push_back({const_cast<std::uint8_t*>(p.data), p.width, p.height, p.channels});
  return out;
}

FrameType checked_type(std::int64_t w, std::int64_t h, PixelFormat fmt, const char* who) {
  if (w <= 0 || h <= 0 || w > UINT32_MAX || h > UINT32_MAX)
    throw FilterError(std::string(who) + ": output dimensions " + std::to_string(w) + "x" +
                      std::to_string(h) + " out of range");
  FrameType t{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h), fmt};
  if (!t.valid()) throw FilterError(std::string(who) + ": invalid output type " + t.to_string());
  return t;
}

}  // namespace

Raster draw_rectangle(const Raster& frame, IntPair pt1, IntPair pt2, Color color,
                      std::int64_t thickness) {
  require_drawable(frame, "draw_rectangle");
  if (thickness == 0 || thickness < -1)
    throw FilterError("draw_rectangle: thickness must be >= 1 or -1, got " + std::to_string(thickness));
  Raster out = frame;
  const std::int64_t minx = std::min(pt1.x, pt2.x), maxx = std::max(pt1.x, pt2.x);
  const std::int64_t miny = std::min(pt1.y, pt2.y), maxy = std::max(pt1.y, pt2.y);
  if (thickness == -1) {
    fill_box(out, minx, miny, maxx + 1, maxy + 1, color);
    return out;
  }
  const std::int64_t w = frame.type.width, h = frame.type.height;
  const int ch = channel_count(frame.type.pixfmt);
  const std::int64_t x0 = std::max<std::int64_t>(minx, 0), x1 = std::min(maxx, w - 1);
  const std::int64_t y0 = std::max<std::int64_t>(miny, 0), y1 = std::min(maxy, h - 1);
  for (std::int64_t y = y0; y <= y1; ++y)
    for (std::int64_t x = x0; x <= x1; ++x) {
      const std::int64_t d = std::min({x - minx, maxx - x, y - miny, maxy - y});
      if (d >= thickness) continue;
      std::uint8_t* px = out.data.data() + (y * w + x) * ch;
      for (int c = 0; c < ch; ++c) px[c] = color.c[c];
    }
  return out;
}

Raster draw_text(const Raster& frame, std::string_view text, IntPair org, std::int64_t scale,
                 Color color) {
  require_drawable(frame, "draw_text");
  if (scale < 1) throw FilterError("draw_text: scale must be >= 1, got " + std::to_string(scale));
  Raster out = frame;
  const std::int64_t top = org.y - kGlyphHeight * scale;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto& cols = glyph(text[i]);
    const std::int64_t left = org.x + static_cast<std::int64_t>(i) * kGlyphAdvance * scale;
    for (int cx = 0; cx < kGlyphWidth; ++cx)
      for (int r = 0; r < kGlyphHeight; ++r) {
        if (!((cols[cx] >> r) & 1)) continue;
        const std::int64_t x = left + cx * scale, y = top + r * scale;
        fill_box(out, x, y, x + scale, y + scale, color);
      }
  }
  return out;
}

Raster crop(const Raster& frame, std::int64_t x, std::int64_t y, std::int64_t w, std::int64_t h) {
  const auto& t = frame.type;
  if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > t.width || y + h > t.height)
    throw FilterError("crop window outside " + t.to_string());
  const bool yuv = t.pixfmt == PixelFormat::Yuv420p;
  if (yuv && (x % 2 || y % 2 || w % 2 || h % 2))
    throw FilterError("yuv420p crop window must be even-aligned");
  Raster out(checked_type(w, h, t.pixfmt, "crop"));
  const auto src = planes_of(frame);
  auto dst = planes_of(out);
  for (std::size_t p = 0; p < src.size(); ++p) {
    const std::int64_t div = p == 0 ? 1 : 2;
    const std::int64_t px = x / div, py = y / div;
    const int ch = src[p].channels;
    for (std::uint32_t row = 0; row < dst[p].height; ++row)
      std::memcpy(dst[p].data + std::size_t{row} * dst[p].width * ch,
                  src[p].data + ((py + row) * src[p].width + px) * ch, std::size_t{dst[p].width} * ch);
  }
  return out;
}

Raster scale_nearest(const Raster& frame, std::int64_t w, std::int64_t h) {
  Raster out(checked_type(w, h, frame.type.pixfmt, "scale_nearest"));
  const auto src = planes_of(frame);
  auto dst = planes_of(out);
  for (std::size_t p = 0; p < src.size(); ++p) {
    const int ch = src[p].channels;
    const std::uint64_t wi = src[p].width, hi = src[p].height;
    const std::uint64_t wo = dst[p].width, ho = dst[p].height;
    for (std::uint64_t y = 0; y < ho; ++y) {
      const std::uint64_t sy = y * hi / ho;
      for (std::uint64_t x = 0; x < wo; ++x) {
        const std::uint64_t sx = x * wi / wo;
        std::memcpy(dst[p].data + (y * wo + x) * ch, src[p].data + (sy * wi + sx) * ch, ch);
      }
    }
  }
  return out;
}

Raster hstack(const Raster& left, const Raster& right) {
  if (left.type.pixfmt != right.type.pixfmt || left.type.height != right.type.height)
    throw FilterError("hstack needs equal heights and formats, got " + left.type.to_string() +
                      " and " + right.type.to_string());
  Raster out(checked_type(std::int64_t{left.type.width} + right.type.width, left.type.height,
                          left.type.pixfmt, "hstack"));
  const auto a = planes_of(left), b = planes_of(right);
  auto dst = planes_of(out);
  for (std::size_t p = 0; p < a.size(); ++p) {
    const std::size_t ch = a[p].channels;
    for (std::uint32_t row = 0; row < dst[p].height; ++row) {
      std::uint8_t* d = dst[p].data + std::size_t{row} * dst[p].width * ch;
      std::memcpy(d, a[p].data + std::size_t{row} * a[p].width * ch, a[p].width * ch);
      std::memcpy(d + a[p].width * ch, b[p].data + std::size_t{row} * b[p].width * ch, b[p].width * ch);
    }
  }
  return out;
}

Raster vstack(const Raster& top, const Raster& bottom) {
  if (top.type.pixfmt != bottom.type.pixfmt || top.type.width != bottom.type.width)
    throw FilterError("vstack needs equal widths and formats, got " + top.type.to_string() +
                      " and " + bottom.type.to_string());
  Raster out(checked_type(top.type.width, std::int64_t{top.type.height} + bottom.type.height,
                          top.type.pixfmt, "vstack"));
  const auto a = planes_of(top), b = planes_of(bottom);
  auto dst = planes_of(out);
  for (std::size_t p = 0; p < a.size(); ++p) {
    const std::size_t na = std::size_t{a[p].width} * a[p].height * a[p].channels;
    const std::size_t nb = std::size_t{b[p].width} * b[p].height * b[p].channels;
    std::memcpy(dst[p].data, a[p].data, na);
    std::memcpy(dst[p].data + na, b[p].data, nb);
  }
  return out;
}

Raster overlay_mask(const Raster& frame, const Raster& mask, Color color, std::int64_t alpha) {
  require_drawable(frame, "overlay_mask");
  if (mask.type.pixfmt != PixelFormat::Gray8) throw FilterError("overlay_mask: mask must be gray8");
  if (mask.type.width != frame.type.width || mask.type.height != frame.type.height)
    throw FilterError("overlay_mask: mask " + mask.type.to_string() + " does not match frame " +
                      frame.type.to_string());
  if (alpha < 0 || alpha > 255) throw FilterError("overlay_mask: alpha must be in 0..255");
  Raster out = frame;
  const int ch = channel_count(frame.type.pixfmt);
  const auto a = static_cast<unsigned>(alpha);
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    if (mask.data[i] == 0) continue;
    std::uint8_t* px = out.data.data() + i * ch;
    for (int c = 0; c < ch; ++c)
      px[c] = static_cast<std::uint8_t>((a * color.c[c] + (255 - a) * px[c] + 127) / 255);
  }
  return out;
}

Raster solid(std::int64_t width, std::int64_t height, PixelFormat fmt, Color color) {
  Raster out(checked_type(width, height, fmt, "solid"));
  if (fmt == PixelFormat::Yuv420p) {
    auto planes = planes_of(out);
    for (int p = 0; p < 3; ++p)
      std::fill_n(planes[p].data, std::size_t{planes[p].width} * planes[p].height, color.c[p]);
    return out;
  }
  fill_box(out, 0, 0, width, height, color);
  return out;
}

Raster pixfmt(const Raster& frame, PixelFormat from, PixelFormat to) {
  if (frame.type.pixfmt != from)
    throw FilterError("pixfmt: frame is " + std::string(pixfmt_name(frame.type.pixfmt)) +
                      ", declared from=" + std::string(pixfmt_name(from)));
  try {
    return convert_pixfmt(frame, to);
  } catch (const std::invalid_argument& e) {
    throw FilterError(std::string("pixfmt: ") + e.what());
  }
}

}  // namespace reel::filters
