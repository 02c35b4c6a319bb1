#pragma once

#include <cstdint>
#include <string>

namespace reel::server {

/// How a spec's output frames split into segments.
struct SegmentLayout {
  std::uint32_t fps_num = 30;
  std::uint32_t fps_den = 1;
  std::uint64_t frames_per_segment = 60;

  /// ceil(duration_ms/1000 * fps_num / fps_den), at least 1. Integer
  /// arithmetic so 2 s at 30 fps is exactly 60.
  static SegmentLayout make(std::uint32_t fps_num, std::uint32_t fps_den, std::uint64_t duration_ms);

  std::uint64_t first_frame(std::uint64_t n) const { return n * frames_per_segment; }
  /// Segments a playlist lists: every full segment, plus the trailing short
  /// one once the spec is terminated.
  std::uint64_t listed_segments(std::uint64_t frames_written, bool terminated) const;
  /// Frames in segment n given the current length (0 if not covered yet).
  std::uint64_t frames_in(std::uint64_t n, std::uint64_t frames_written, bool terminated) const;
};

/// Event-stream manifest:
///
///   #EXTM3U
///   #EXT-X-VERSION:3
///   #EXT-X-PLAYLIST-TYPE:EVENT
///   #EXT-X-TARGETDURATION:<ceil of the full segment duration in seconds>
///   #EXT-X-MEDIA-SEQUENCE:0
///   #EXTINF:<seconds, 3 decimals>,
///   segment-<n>.tvc
///   ...
///   #EXT-X-ENDLIST            (terminated specs only)
///
/// Every line ends with '\n'.
std::string render_playlist(const SegmentLayout& layout, std::uint64_t frames_written, bool terminated);

}  // namespace reel::server
