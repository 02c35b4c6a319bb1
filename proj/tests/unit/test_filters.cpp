#include <algorithm>
#include <random>

#include "doctest.h"
#include "reel/codec/synthetic.hpp"
#include "reel/filters/filters.hpp"
#include "reel/filters/font5x7.hpp"
#include "reel/filters/registry.hpp"

using namespace reel;
using namespace reel::filters;

namespace {

const Color kWhite{{255, 255, 255}};

std::size_t count_pixels(const Raster& r, std::uint8_t value) {
  const int ch = channel_count(r.type.pixfmt);
  std::size_t n = 0;
  for (std::size_t p = 0; p < r.data.size(); p += ch) {
    bool all = true;
    for (int c = 0; c < ch; ++c) all = all && r.data[p + c] == value;
    n += all;
  }
  return n;
}

Raster gray(std::uint32_t w, std::uint32_t h) { return Raster(FrameType{w, h, PixelFormat::Gray8}); }

}  // namespace

TEST_CASE("rectangle outline on a 4x4 box") {
  const Raster in = gray(10, 10);
  const Raster out = draw_rectangle(in, {2, 2}, {5, 5}, kWhite, 1);
  CHECK(count_pixels(out, 255) == 12);
  CHECK(out.data[2 * 10 + 2] == 255);
  CHECK(out.data[3 * 10 + 3] == 0);
  CHECK(count_pixels(draw_rectangle(in, {5, 5}, {2, 2}, kWhite, 1), 255) == 12);
  CHECK(count_pixels(draw_rectangle(in, {2, 2}, {5, 5}, kWhite, -1), 255) == 16);
  CHECK(count_pixels(draw_rectangle(in, {2, 2}, {5, 5}, kWhite, 2), 255) == 16);
  CHECK(count_pixels(draw_rectangle(in, {0, 0}, {9, 9}, kWhite, 2), 255) == 100 - 36);
}

TEST_CASE("rectangles clip to the frame") {
  const Raster in = gray(10, 10);
  CHECK(draw_rectangle(in, {20, 20}, {30, 30}, kWhite, 1) == in);
  CHECK(draw_rectangle(in, {-5, -5}, {-1, -1}, kWhite, -1) == in);
  // Only the right and bottom edges land inside.
  CHECK(count_pixels(draw_rectangle(in, {-3, -3}, {4, 4}, kWhite, 1), 255) == 9);
}

TEST_CASE("rectangle colors follow the channel order of the frame") {
  const Color red{{255, 0, 0}};
  const Raster rgb = draw_rectangle(Raster(FrameType{4, 4, PixelFormat::Rgb8}), {0, 0}, {0, 0}, red, -1);
  CHECK(rgb.data[0] == 255);
  CHECK(rgb.data[2] == 0);
  const Raster bgr = draw_rectangle(Raster(FrameType{4, 4, PixelFormat::Bgr8}), {0, 0}, {0, 0}, red, -1);
  CHECK(bgr.data[0] == 255);
  CHECK(bgr.data[2] == 0);
  const Raster g = draw_rectangle(gray(4, 4), {0, 0}, {0, 0}, Color{{9, 1, 2}}, -1);
  CHECK(g.data[0] == 9);
}

TEST_CASE("drawing rejects planar frames and bad thickness") {
  const Raster yuv(FrameType{4, 4, PixelFormat::Yuv420p});
  CHECK_THROWS_AS(draw_rectangle(yuv, {0, 0}, {1, 1}, kWhite, 1), FilterError);
  CHECK_THROWS_AS(draw_text(yuv, "a", {0, 7}, 1, kWhite), FilterError);
  CHECK_THROWS_AS(draw_rectangle(gray(4, 4), {0, 0}, {1, 1}, kWhite, 0), FilterError);
  CHECK_THROWS_AS(draw_text(gray(4, 4), "a", {0, 7}, 0, kWhite), FilterError);
}

TEST_CASE("text pixel counts come from the glyph table") {
  const Raster in = gray(64, 32);
  CHECK(glyph_pixel_count(' ') == 0);
  const int h = glyph_pixel_count('H'), i = glyph_pixel_count('i');
  CHECK(h > 0);
  CHECK(count_pixels(draw_text(in, "Hi", {1, 8}, 1, kWhite), 255) == static_cast<std::size_t>(h + i));
  CHECK(count_pixels(draw_text(in, "Hi", {1, 16}, 2, kWhite), 255) == static_cast<std::size_t>(4 * (h + i)));
  CHECK(count_pixels(draw_text(in, " ", {1, 8}, 1, kWhite), 255) == 0);
  CHECK(draw_text(in, "\x01", {1, 8}, 1, kWhite) == draw_text(in, "?", {1, 8}, 1, kWhite));
  CHECK(text_size(3, 2).width == 2 * 12 + 10);  // no gap after the last glyph
  CHECK(text_size(3, 2).height == 14);
}

TEST_CASE("text lies inside its cells") {
  const Raster out = draw_text(gray(40, 20), "W", {3, 10}, 1, kWhite);
  for (std::uint32_t y = 0; y < 20; ++y)
    for (std::uint32_t x = 0; x < 40; ++x)
      if (out.data[y * 40 + x]) {
        CHECK(x >= 3);
        CHECK(x < 8);
        CHECK(y >= 3);
        CHECK(y < 10);
      }
  // Bit r of each column is row r from the top.
  const auto& cols = glyph('W');
  for (int c = 0; c < kGlyphWidth; ++c)
    for (int r = 0; r < kGlyphHeight; ++r)
      CHECK(static_cast<bool>(out.data[(3 + r) * 40 + 3 + c]) == static_cast<bool>(cols[c] >> r & 1));
}

TEST_CASE("crop and scale identities") {
  for (auto fmt : {PixelFormat::Gray8, PixelFormat::Rgb8, PixelFormat::Yuv420p}) {
    const FrameType t{12, 8, fmt};
    const Raster in = synthetic_frame(t, 3, 1);
    CHECK(crop(in, 0, 0, 12, 8) == in);
    CHECK(scale_nearest(in, 12, 8) == in);
    const Raster c = crop(in, 2, 4, 6, 4);
    CHECK(c.type == FrameType{6, 4, fmt});
    if (fmt == PixelFormat::Gray8)
      for (std::uint32_t y = 0; y < 4; ++y)
        for (std::uint32_t x = 0; x < 6; ++x) CHECK(c.data[y * 6 + x] == in.data[(y + 4) * 12 + x + 2]);
    if (fmt == PixelFormat::Yuv420p) CHECK(c.plane(1)[0] == in.plane(1)[2 * 6 + 1]);
  }
  CHECK_THROWS_AS(crop(gray(4, 4), 2, 0, 3, 1), FilterError);
  CHECK_THROWS_AS(crop(gray(4, 4), -1, 0, 1, 1), FilterError);
  CHECK_THROWS_AS(crop(Raster(FrameType{4, 4, PixelFormat::Yuv420p}), 1, 0, 2, 2), FilterError);
}

TEST_CASE("nearest scaling of a checkerboard") {
  Raster board = gray(2, 2);
  board.data = {0, 255, 255, 0};
  const Raster up = scale_nearest(board, 4, 4);
  const std::vector<std::uint8_t> want{0, 0, 255, 255, 0, 0, 255, 255, 255, 255, 0, 0, 255, 255, 0, 0};
  CHECK(up.data == want);
  CHECK(scale_nearest(up, 2, 2) == board);
  const Raster odd = scale_nearest(board, 3, 1);
  CHECK(odd.data == std::vector<std::uint8_t>{0, 0, 255});
}

TEST_CASE("stacking") {
  Raster a = gray(2, 2), b = gray(3, 2);
  a.data = {1, 2, 3, 4};
  b.data = {5, 6, 7, 8, 9, 10};
  CHECK(hstack(a, b).data == std::vector<std::uint8_t>{1, 2, 5, 6, 7, 3, 4, 8, 9, 10});
  Raster c = gray(2, 1);
  c.data = {11, 12};
  CHECK(vstack(a, c).data == std::vector<std::uint8_t>{1, 2, 3, 4, 11, 12});
  CHECK_THROWS_AS(vstack(a, b), FilterError);
  CHECK_THROWS_AS(hstack(a, c), FilterError);
  CHECK_THROWS_AS(hstack(a, Raster(FrameType{2, 2, PixelFormat::Rgb8})), FilterError);
  const FrameType y{4, 2, PixelFormat::Yuv420p};
  const Raster ys = hstack(synthetic_frame(y, 0, 0), synthetic_frame(y, 1, 0));
  CHECK(ys.type == FrameType{8, 2, PixelFormat::Yuv420p});
  CHECK(ys.plane(1)[2] == synthetic_frame(y, 1, 0).plane(1)[0]);
}

TEST_CASE("overlay alpha blending") {
  Raster frame = gray(2, 1);
  frame.data = {100, 100};
  Raster mask = gray(2, 1);
  mask.data = {255, 0};
  const Color c{{200, 0, 0}};
  CHECK(overlay_mask(frame, mask, c, 0).data == std::vector<std::uint8_t>{100, 100});
  CHECK(overlay_mask(frame, mask, c, 255).data == std::vector<std::uint8_t>{200, 100});
  CHECK(overlay_mask(frame, mask, c, 128).data[0] == (128 * 200 + 127 * 100 + 127) / 255);
  CHECK(overlay_mask(frame, mask, c, 128).data[1] == 100);
  CHECK_THROWS_AS(overlay_mask(frame, mask, c, 256), FilterError);
  CHECK_THROWS_AS(overlay_mask(frame, gray(3, 1), c, 10), FilterError);
  CHECK_THROWS_AS(overlay_mask(frame, Raster(FrameType{2, 1, PixelFormat::Rgb8}), c, 10), FilterError);
}

TEST_CASE("solid frames") {
  const Raster g = solid(3, 2, PixelFormat::Gray8, Color{{7, 8, 9}});
  CHECK(g.data == std::vector<std::uint8_t>(6, 7));
  const Raster rgb = solid(1, 1, PixelFormat::Rgb8, Color{{7, 8, 9}});
  CHECK(rgb.data == std::vector<std::uint8_t>{7, 8, 9});
  const Raster yuv = solid(2, 2, PixelFormat::Yuv420p, Color{{16, 128, 200}});
  CHECK(yuv.data == std::vector<std::uint8_t>{16, 16, 16, 16, 128, 200});
  CHECK_THROWS_AS(solid(0, 2, PixelFormat::Gray8, {}), FilterError);
  CHECK_THROWS_AS(solid(3, 2, PixelFormat::Yuv420p, {}), FilterError);
}

TEST_CASE("pixfmt filter checks the declared input format") {
  const Raster rgb(FrameType{2, 2, PixelFormat::Rgb8});
  CHECK(pixfmt(rgb, PixelFormat::Rgb8, PixelFormat::Gray8).type.pixfmt == PixelFormat::Gray8);
  CHECK_THROWS_AS(pixfmt(rgb, PixelFormat::Bgr8, PixelFormat::Gray8), FilterError);
}

TEST_CASE("filters leave their inputs untouched") {
  const FrameType t{8, 8, PixelFormat::Rgb8};
  const Raster in = synthetic_frame(t, 1, 2);
  const Raster copy = in;
  Raster mask = gray(8, 8);
  std::fill(mask.data.begin(), mask.data.begin() + 20, 255);
  const Raster mask_copy = mask;
  draw_rectangle(in, {1, 1}, {6, 6}, kWhite, 2);
  draw_text(in, "ok", {0, 7}, 1, kWhite);
  crop(in, 1, 1, 3, 3);
  scale_nearest(in, 3, 5);
  hstack(in, in);
  vstack(in, in);
  overlay_mask(in, mask, kWhite, 77);
  pixfmt(in, PixelFormat::Rgb8, PixelFormat::Yuv420p);
  CHECK(in == copy);
  CHECK(mask == mask_copy);
  CHECK(draw_text(in, "ok", {0, 7}, 1, kWhite) == draw_text(in, "ok", {0, 7}, 1, kWhite));
}

TEST_CASE("registry evaluation matches the derived output type") {
  const auto& table = signature_table();
  std::mt19937_64 rng(11);
  const PixelFormat fmts[] = {PixelFormat::Gray8, PixelFormat::Rgb8, PixelFormat::Bgr8,
                              PixelFormat::Yuv420p};
  auto small = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  auto rand_type = [&]() {
    return FrameType{static_cast<std::uint32_t>(2 * small(1, 6)), static_cast<std::uint32_t>(2 * small(1, 6)),
                     fmts[rng() % 4]};
  };
  int agreed = 0, rejected = 0;
  for (const auto& [name, sig] : table) {
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<TypedArg> typed;
      std::vector<EvalArg> eval;
      const FrameType base = rand_type();
      for (std::size_t p = 0; p < sig.params.size(); ++p) {
        switch (sig.params[p]) {
          case ParamKind::Frame: {
            FrameType t = base;
            if (rng() % 5 == 0) t = rand_type();
            if (name == "overlay_mask" && p == 1 && rng() % 4) t.pixfmt = PixelFormat::Gray8;
            typed.emplace_back(t);
            eval.emplace_back(std::make_shared<const Raster>(synthetic_frame(t, trial, p)));
            continue;
          }
          case ParamKind::Int: {
            std::int64_t v = small(-2, 14);
            if (name == "overlay_mask") v = small(-10, 300);
            if (name == "draw_rectangle" && rng() % 3 == 0) v = -1;
            typed.emplace_back(Value(v));
            eval.emplace_back(Value(v));
            continue;
          }
          case ParamKind::Str: {
            std::string s;
            if (name == "draw_text") {
              s = "ab?";
            } else {
              const char* names[] = {"gray8", "rgb8", "bgr8", "yuv420p", "rgba"};
              s = names[rng() % 5];
              if (name == "pixfmt" && p == 1 && rng() % 4) s = std::string(pixfmt_name(base.pixfmt));
            }
            typed.emplace_back(Value(s));
            eval.emplace_back(Value(s));
            continue;
          }
          case ParamKind::IntPair: {
            const IntPair v{small(-3, 14), small(-3, 14)};
            typed.emplace_back(Value(v));
            eval.emplace_back(Value(v));
            continue;
          }
          case ParamKind::Color: {
            const Color v{{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
                           static_cast<std::uint8_t>(rng())}};
            typed.emplace_back(Value(v));
            eval.emplace_back(Value(v));
            continue;
          }
          default:
            FAIL("unexpected parameter kind in " << name);
        }
      }
      std::optional<FrameType> derived;
      try {
        derived = sig.derive(typed);
      } catch (const RuleError&) {
      }
      if (derived) {
        const Raster out = apply_filter(name, eval);
        CHECK_MESSAGE(out.type == *derived, name);
        CHECK(out.data.size() == derived->byte_size());
        ++agreed;
      } else {
        CHECK_THROWS_AS_MESSAGE(apply_filter(name, eval), FilterError, name);
        ++rejected;
      }
    }
  }
  CHECK(agreed > 500);
  CHECK(rejected > 100);
  CHECK_THROWS_AS(apply_filter("no_such_filter", {}), FilterError);
}
