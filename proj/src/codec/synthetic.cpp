#include "reel/codec/synthetic.hpp"

namespace reel {

namespace {

void fill_plane(std::uint8_t* dst, std::uint32_t w, std::uint32_t h, int channels, int channel,
                std::uint32_t base) {
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t x = 0; x < w; ++x)
      dst[(std::size_t{y} * w + x) * channels + channel] =
          static_cast<std::uint8_t>(x + 2 * y + base + 37u * channel);
}

}  // namespace

Raster synthetic_frame(const FrameType& type, std::uint32_t frame, std::uint32_t seed) {
  Raster out(type);
  const std::uint32_t base = 3u * frame + seed;
  switch (type.pixfmt) {
    case PixelFormat::Gray8:
      fill_plane(out.data.data(), type.width, type.height, 1, 0, base);
      break;
    case PixelFormat::Rgb8:
    case PixelFormat::Bgr8:
      for (int c = 0; c < 3; ++c) fill_plane(out.data.data(), type.width, type.height, 3, c, base);
      break;
    case PixelFormat::Yuv420p:
      fill_plane(out.plane(0), type.width, type.height, 1, 0, base);
      // Chroma planes: channel offset 37c applied via the plane index.
      for (int c = 1; c < 3; ++c) {
        std::uint8_t* p = out.plane(c);
        const std::uint32_t cw = type.width / 2, ch = type.height / 2;
        for (std::uint32_t y = 0; y < ch; ++y)
          for (std::uint32_t x = 0; x < cw; ++x)
            p[std::size_t{y} * cw + x] = static_cast<std::uint8_t>(x + 2 * y + base + 37u * c);
      }
      break;
  }
  return out;
}

std::vector<std::uint8_t> synthetic_stream(const FrameType& type, std::uint32_t frames,
                                           const EncoderParams& params, std::uint32_t seed) {
  TvcEncoder enc(type, params);
  for (std::uint32_t f = 0; f < frames; ++f) enc.push(synthetic_frame(type, f, seed));
  return enc.finish();
}

}  // namespace reel
