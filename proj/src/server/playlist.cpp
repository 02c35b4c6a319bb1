#include "reel/server/playlist.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace reel::server {

namespace {

std::string seconds_text(std::uint64_t frames, std::uint32_t num, std::uint32_t den) {
  // Milliseconds rounded half up, printed with three decimals.
  const std::uint64_t ms = (frames * den * 1000 + num / 2) / num;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%llu.%03llu", static_cast<unsigned long long>(ms / 1000),
                static_cast<unsigned long long>(ms % 1000));
  return buf;
}

}  // namespace

SegmentLayout SegmentLayout::make(std::uint32_t fps_num, std::uint32_t fps_den, std::uint64_t duration_ms) {
  if (fps_num == 0 || fps_den == 0) throw std::invalid_argument("fps must be positive");
  if (duration_ms == 0) throw std::invalid_argument("segment duration must be positive");
  const std::uint64_t num = duration_ms * fps_num;
  const std::uint64_t den = std::uint64_t{1000} * fps_den;
  return SegmentLayout{fps_num, fps_den, std::max<std::uint64_t>(1, (num + den - 1) / den)};
}

std::uint64_t SegmentLayout::listed_segments(std::uint64_t frames_written, bool terminated) const {
  const std::uint64_t full = frames_written / frames_per_segment;
  return full + (terminated && frames_written % frames_per_segment != 0 ? 1 : 0);
}

std::uint64_t SegmentLayout::frames_in(std::uint64_t n, std::uint64_t frames_written, bool terminated) const {
  if (n >= listed_segments(frames_written, terminated)) return 0;
  return std::min(frames_per_segment, frames_written - first_frame(n));
}

std::string render_playlist(const SegmentLayout& layout, std::uint64_t frames_written, bool terminated) {
  const std::uint64_t target_num = layout.frames_per_segment * layout.fps_den;
  const std::uint64_t target = (target_num + layout.fps_num - 1) / layout.fps_num;
  std::string out =
      "#EXTM3U\n"
      "#EXT-X-VERSION:3\n"
      "#EXT-X-PLAYLIST-TYPE:EVENT\n"
      "#EXT-X-TARGETDURATION:" + std::to_string(target) + "\n"
      "#EXT-X-MEDIA-SEQUENCE:0\n";
  const std::uint64_t n = layout.listed_segments(frames_written, terminated);
  for (std::uint64_t s = 0; s < n; ++s) {
    out += "#EXTINF:" + seconds_text(layout.frames_in(s, frames_written, terminated), layout.fps_num,
                                     layout.fps_den) + ",\n";
    out += "segment-" + std::to_string(s) + ".tvc\n";
  }
  if (terminated) out += "#EXT-X-ENDLIST\n";
  return out;
}

}  // namespace reel::server
