#include "reel/ir/types.hpp"

namespace reel {

std::string_view pixfmt_name(PixelFormat fmt) {
  switch (fmt) {
    case PixelFormat::Gray8: return "gray8";
    case PixelFormat::Rgb8: return "rgb8";
    case PixelFormat::Bgr8: return "bgr8";
    case PixelFormat::Yuv420p: return "yuv420p";
  }
  return "?";
}

std::optional<PixelFormat> parse_pixfmt(std::string_view name) {
  if (name == "gray8") return PixelFormat::Gray8;
  if (name == "rgb8") return PixelFormat::Rgb8;
  if (name == "bgr8") return PixelFormat::Bgr8;
  if (name == "yuv420p") return PixelFormat::Yuv420p;
  return std::nullopt;
}

bool FrameType::valid() const {
  if (width == 0 || height == 0) return false;
  if (pixfmt == PixelFormat::Yuv420p && (width % 2 != 0 || height % 2 != 0)) return false;
  return static_cast<std::uint8_t>(pixfmt) <= 3;
}

std::size_t FrameType::byte_size() const {
  const std::size_t px = std::size_t{width} * height;
  switch (pixfmt) {
    case PixelFormat::Gray8: return px;
    case PixelFormat::Rgb8:
    case PixelFormat::Bgr8: return 3 * px;
    case PixelFormat::Yuv420p: return px + 2 * (std::size_t{width / 2} * (height / 2));
  }
  return 0;
}

std::string FrameType::to_string() const {
  return "<" + std::to_string(width) + "x" + std::to_string(height) + ", " +
         std::string(pixfmt_name(pixfmt)) + ">";
}

void require_valid(const FrameType& t) {
  if (t.width == 0 || t.height == 0)
    throw std::invalid_argument("frame type " + t.to_string() + " has a zero dimension");
  if (t.pixfmt == PixelFormat::Yuv420p && (t.width % 2 != 0 || t.height % 2 != 0))
    throw std::invalid_argument("frame type " + t.to_string() + " needs even dimensions");
}

}  // namespace reel
