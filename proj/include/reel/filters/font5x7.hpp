#pragma once

#include <array>
#include <cstdint>

namespace reel::filters {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kGlyphAdvance = 6;

/// Golden glyph table for ASCII 32..126. Five column bytes per glyph; bit r
/// of a column is row r counted from the top.
const std::array<std::uint8_t, kGlyphWidth>& glyph(char c);

/// Number of set pixels in a glyph at scale 1.
int glyph_pixel_count(char c);

/// Width and height in pixels of `text` rendered at `scale`.
struct TextSize {
  std::int64_t width;
  std::int64_t height;
};
TextSize text_size(std::size_t length, std::int64_t scale);

}  // namespace reel::filters
