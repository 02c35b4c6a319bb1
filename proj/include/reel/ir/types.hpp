#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reel {

enum class PixelFormat : std::uint8_t {
  Gray8 = 0,
  Rgb8 = 1,
  Bgr8 = 2,
  Yuv420p = 3,
};

/// Canonical lowercase name ("gray8", "rgb8", "bgr8", "yuv420p").
std::string_view pixfmt_name(PixelFormat fmt);
std::optional<PixelFormat> parse_pixfmt(std::string_view name);

inline bool is_interleaved(PixelFormat fmt) {
  return fmt == PixelFormat::Gray8 || fmt == PixelFormat::Rgb8 || fmt == PixelFormat::Bgr8;
}

inline int channel_count(PixelFormat fmt) {
  switch (fmt) {
    case PixelFormat::Gray8: return 1;
    case PixelFormat::Rgb8:
    case PixelFormat::Bgr8:
    case PixelFormat::Yuv420p: return 3;
  }
  return 0;
}

/// Static type of every frame-valued expression: resolution and pixel format.
struct FrameType {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  PixelFormat pixfmt = PixelFormat::Gray8;

  bool operator==(const FrameType&) const = default;

  /// Width/height positive, and even when the format is YUV420P.
  bool valid() const;
  /// Exact plane byte count (no padding).
  std::size_t byte_size() const;
  std::string to_string() const;
};

/// Throws std::invalid_argument describing why `t` is not a valid frame type.
void require_valid(const FrameType& t);

}  // namespace reel
