#include "reel/codec/pixfmt.hpp"

#include <algorithm>
#include <stdexcept>

namespace reel {

namespace {

inline std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

// Right shift of a signed intermediate rounds toward negative infinity,
// which is what C++20 guarantees for >> on negative values.
inline int asr8(int v) { return v >> 8; }

/// Expands any format into an interleaved RGB buffer.
std::vector<Rgb> to_rgb(const Raster& in) {
  const std::uint32_t w = in.type.width, h = in.type.height;
  std::vector<Rgb> out(std::size_t{w} * h);
  const std::uint8_t* d = in.data.data();
  switch (in.type.pixfmt) {
    case PixelFormat::Gray8:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = {d[i], d[i], d[i]};
      break;
    case PixelFormat::Rgb8:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = {d[3 * i], d[3 * i + 1], d[3 * i + 2]};
      break;
    case PixelFormat::Bgr8:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = {d[3 * i + 2], d[3 * i + 1], d[3 * i]};
      break;
    case PixelFormat::Yuv420p: {
      const std::uint8_t* yp = in.plane(0);
      const std::uint8_t* up = in.plane(1);
      const std::uint8_t* vp = in.plane(2);
      const std::uint32_t cw = w / 2;
      for (std::uint32_t y = 0; y < h; ++y)
        for (std::uint32_t x = 0; x < w; ++x) {
          const std::size_t c = std::size_t{y / 2} * cw + x / 2;
          out[std::size_t{y} * w + x] = yuv_to_rgb({yp[std::size_t{y} * w + x], up[c], vp[c]});
        }
      break;
    }
  }
  return out;
}

Raster from_rgb(const std::vector<Rgb>& px, std::uint32_t w, std::uint32_t h, PixelFormat to) {
  Raster out(FrameType{w, h, to});
  std::uint8_t* d = out.data.data();
  switch (to) {
    case PixelFormat::Gray8:
      for (std::size_t i = 0; i < px.size(); ++i) d[i] = rgb_to_yuv(px[i]).y;
      break;
    case PixelFormat::Rgb8:
      for (std::size_t i = 0; i < px.size(); ++i) {
        d[3 * i] = px[i].r;
        d[3 * i + 1] = px[i].g;
        d[3 * i + 2] = px[i].b;
      }
      break;
    case PixelFormat::Bgr8:
      for (std::size_t i = 0; i < px.size(); ++i) {
        d[3 * i] = px[i].b;
        d[3 * i + 1] = px[i].g;
        d[3 * i + 2] = px[i].r;
      }
      break;
    case PixelFormat::Yuv420p: {
      std::uint8_t* yp = out.plane(0);
      std::uint8_t* up = out.plane(1);
      std::uint8_t* vp = out.plane(2);
      const std::uint32_t cw = w / 2;
      for (std::uint32_t y = 0; y < h; ++y)
        for (std::uint32_t x = 0; x < w; ++x) {
          const Yuv p = rgb_to_yuv(px[std::size_t{y} * w + x]);
          yp[std::size_t{y} * w + x] = p.y;
          if (x % 2 == 0 && y % 2 == 0) {
            const std::size_t c = std::size_t{y / 2} * cw + x / 2;
            up[c] = p.u;
            vp[c] = p.v;
          }
        }
      break;
    }
  }
  return out;
}

}  // namespace

Yuv rgb_to_yuv(Rgb p) {
  const int r = p.r, g = p.g, b = p.b;
  return {clamp8(asr8(77 * r + 150 * g + 29 * b)), clamp8(asr8(-43 * r - 85 * g + 128 * b) + 128),
          clamp8(asr8(128 * r - 107 * g - 21 * b) + 128)};
}

Rgb yuv_to_rgb(Yuv p) {
  const int y = p.y, u = p.u - 128, v = p.v - 128;
  return {clamp8(y + asr8(359 * v)), clamp8(y - asr8(88 * u + 183 * v)), clamp8(y + asr8(454 * u))};
}

Raster convert_pixfmt(const Raster& frame, PixelFormat to) {
  const FrameType& t = frame.type;
  if ((to == PixelFormat::Yuv420p || t.pixfmt == PixelFormat::Yuv420p) &&
      (t.width % 2 != 0 || t.height % 2 != 0))
    throw std::invalid_argument("yuv420p conversion needs even dimensions, got " + t.to_string());
  if (t.pixfmt == to) return frame;

  const std::size_t luma = std::size_t{t.width} * t.height;
  if (t.pixfmt == PixelFormat::Yuv420p && to == PixelFormat::Gray8) {
    std::vector<std::uint8_t> y(frame.data.begin(), frame.data.begin() + luma);
    return Raster(FrameType{t.width, t.height, to}, std::move(y));
  }
  if (t.pixfmt == PixelFormat::Gray8 && to == PixelFormat::Yuv420p) {
    Raster out(FrameType{t.width, t.height, to});
    std::copy(frame.data.begin(), frame.data.end(), out.data.begin());
    std::fill(out.data.begin() + luma, out.data.end(), 128);
    return out;
  }
  if ((t.pixfmt == PixelFormat::Rgb8 && to == PixelFormat::Bgr8) ||
      (t.pixfmt == PixelFormat::Bgr8 && to == PixelFormat::Rgb8)) {
    Raster out(FrameType{t.width, t.height, to});
    for (std::size_t i = 0; i < luma; ++i) {
      out.data[3 * i] = frame.data[3 * i + 2];
      out.data[3 * i + 1] = frame.data[3 * i + 1];
      out.data[3 * i + 2] = frame.data[3 * i];
    }
    return out;
  }
  return from_rgb(to_rgb(frame), t.width, t.height, to);
}

}  // namespace reel
