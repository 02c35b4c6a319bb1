#include <algorithm>
#include <cstring>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "reel/codec/pixfmt.hpp"
#include "reel/codec/rle.hpp"
#include "reel/codec/synthetic.hpp"
#include "reel/codec/tvc.hpp"

using namespace reel;

namespace {

std::uint32_t le32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return b[at] | (b[at + 1] << 8) | (b[at + 2] << 16) | (std::uint32_t{b[at + 3]} << 24);
}
std::uint64_t le64(const std::vector<std::uint8_t>& b, std::size_t at) {
  return le32(b, at) | (std::uint64_t{le32(b, at + 4)} << 32);
}

Raster random_raster(std::mt19937_64& rng, FrameType t, int levels = 256) {
  Raster r(t);
  std::uniform_int_distribution<int> d(0, levels - 1);
  for (auto& b : r.data) b = static_cast<std::uint8_t>(d(rng) * (255 / std::max(1, levels - 1)));
  return r;
}

// Records walked over the raw container, independent of GopDecoder.
struct Record {
  std::uint8_t kind;
  std::uint32_t pres;
  std::uint32_t len;
  std::size_t at;
};

std::vector<Record> walk_records(const std::vector<std::uint8_t>& b, std::size_t from, std::size_t to) {
  std::vector<Record> out;
  while (from < to) {
    Record r{b[from], le32(b, from + 1), le32(b, from + 5), from + 9};
    out.push_back(r);
    from += 9 + r.len;
  }
  return out;
}

// Decode order of one GOP written out by hand from the pattern rule.
std::vector<std::uint32_t> expected_order(std::uint32_t n, bool b_frames) {
  std::vector<std::uint32_t> order{0};
  if (!b_frames) {
    for (std::uint32_t k = 1; k < n; ++k) order.push_back(k);
    return order;
  }
  for (std::uint32_t k = 1; k < n; k += 2) {
    if (k + 1 < n) {
      order.push_back(k + 1);
      order.push_back(k);
    } else {
      order.push_back(k);
    }
  }
  return order;
}

class RecordingReader final : public ByteReader {
 public:
  explicit RecordingReader(std::span<const std::uint8_t> b) : inner_(b), size_(b.size()) {}
  std::uint64_t size() const override { return size_; }
  void read(std::uint64_t offset, std::span<std::uint8_t> out) const override {
    max_end = std::max<std::uint64_t>(max_end, offset + out.size());
    inner_.read(offset, out);
  }
  mutable std::uint64_t max_end = 0;

 private:
  SpanReader inner_;
  std::uint64_t size_;
};

}  // namespace

TEST_CASE("rle emits maximal runs capped at 255") {
  std::vector<std::uint8_t> raw(600, 7);
  raw.push_back(8);
  const auto enc = rle::encode(raw);
  CHECK(enc == std::vector<std::uint8_t>{255, 7, 255, 7, 90, 7, 1, 8});
  std::vector<std::uint8_t> back(raw.size());
  CHECK(rle::decode(enc, back));
  CHECK(back == raw);
  CHECK(rle::encode({}).empty());
}

TEST_CASE("rle decode rejects malformed payloads") {
  std::vector<std::uint8_t> out(4);
  CHECK_FALSE(rle::decode(std::vector<std::uint8_t>{4}, out));
  CHECK_FALSE(rle::decode(std::vector<std::uint8_t>{0, 1, 4, 1}, out));
  CHECK_FALSE(rle::decode(std::vector<std::uint8_t>{3, 1}, out));
  CHECK_FALSE(rle::decode(std::vector<std::uint8_t>{5, 1}, out));
  CHECK(rle::decode(std::vector<std::uint8_t>{2, 1, 2, 9}, out));
  CHECK(out == std::vector<std::uint8_t>{1, 1, 9, 9});
}

TEST_CASE("container layout is little-endian and matches the documented offsets") {
  const FrameType t{6, 4, PixelFormat::Gray8};
  const auto bytes = testing::synthetic_stream(t, 10, 4, false);
  REQUIRE(bytes.size() > 25 + 3 * 16);
  CHECK(std::memcmp(bytes.data(), "TVC1", 4) == 0);
  CHECK((bytes[4] | bytes[5] << 8) == 6);
  CHECK((bytes[6] | bytes[7] << 8) == 4);
  CHECK(bytes[8] == 0);
  CHECK(le32(bytes, 9) == 30);
  CHECK(le32(bytes, 13) == 1);
  CHECK(le32(bytes, 17) == 10);
  CHECK(le32(bytes, 21) == 3);
  const std::size_t index_end = 25 + 3 * 16;
  std::uint64_t prev = 0;
  const std::uint32_t firsts[] = {0, 4, 8}, counts[] = {4, 4, 2};
  for (int g = 0; g < 3; ++g) {
    const std::size_t e = 25 + g * 16;
    const auto off = le64(bytes, e);
    CHECK(off > prev);
    if (g == 0) CHECK(off == index_end);
    CHECK(le32(bytes, e + 8) == firsts[g]);
    CHECK(le32(bytes, e + 12) == counts[g]);
    CHECK(bytes[off] == 0);  // every GOP opens with an I record
    prev = off;
  }
}

TEST_CASE("identical frames give all-zero P deltas") {
  const FrameType t{16, 16, PixelFormat::Gray8};
  std::vector<Raster> frames(3, synthetic_frame(t, 0, 0));
  const auto bytes = encode_tvc(frames, EncoderParams{30, 1, 3, false});
  const auto recs = walk_records(bytes, 25 + 16, bytes.size());
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].kind == 0);
  const std::size_t minimal = 2 * ((t.byte_size() + 254) / 255);
  for (int i = 1; i < 3; ++i) {
    CHECK(recs[i].kind == 1);
    CHECK(recs[i].len == minimal);
    for (std::size_t k = 0; k < recs[i].len; k += 2) CHECK(bytes[recs[i].at + k + 1] == 0);
  }
}

TEST_CASE("I,B,P is stored as I,P,B and decodes in order 0,2,1") {
  const FrameType t{8, 8, PixelFormat::Gray8};
  std::vector<Raster> frames;
  for (std::uint32_t f = 0; f < 3; ++f) frames.push_back(synthetic_frame(t, f, 0));
  const auto bytes = encode_tvc(frames, EncoderParams{30, 1, 3, true});
  const auto recs = walk_records(bytes, 25 + 16, bytes.size());
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].kind == 0);
  CHECK(recs[1].kind == 1);
  CHECK(recs[2].kind == 2);
  CHECK(recs[0].pres == 0);
  CHECK(recs[1].pres == 2);
  CHECK(recs[2].pres == 1);

  MemorySource src(bytes);
  GopDecoder dec = src.open_gop(0);
  CHECK(dec.future() == std::set<std::uint32_t>{0, 1, 2});
  std::vector<std::uint32_t> got;
  while (!dec.finished()) {
    auto f = dec.step();
    CHECK(*f.raster == frames[f.presentation_index]);
    got.push_back(f.presentation_index);
  }
  CHECK(got == std::vector<std::uint32_t>{0, 2, 1});
  CHECK_THROWS_AS(dec.step(), CodecError);
}

TEST_CASE("decode order matches the pattern rule for every GOP length") {
  for (std::uint32_t n = 1; n < 40; ++n)
    for (bool b : {false, true}) {
      CHECK(gop_decode_order(n, b) == expected_order(n, b));
      auto sorted = gop_decode_order(n, b);
      std::sort(sorted.begin(), sorted.end());
      for (std::uint32_t i = 0; i < n; ++i) CHECK(sorted[i] == i);
    }
  const auto kinds = gop_frame_kinds(6, true);
  CHECK(kinds == std::vector<FrameKind>{FrameKind::I, FrameKind::B, FrameKind::P, FrameKind::B,
                                        FrameKind::P, FrameKind::P});
}

TEST_CASE("one-frame GOP") {
  const FrameType t{4, 4, PixelFormat::Rgb8};
  const auto bytes = testing::synthetic_stream(t, 1, 1, true);
  MemorySource src(bytes);
  GopDecoder dec = src.open_gop(0);
  CHECK(dec.future() == std::set<std::uint32_t>{0});
  auto f = dec.step();
  CHECK(f.presentation_index == 0);
  CHECK(*f.raster == synthetic_frame(t, 0, 0));
  CHECK(dec.finished());
}

TEST_CASE("round trip over random sequences") {
  std::mt19937_64 rng(42);
  const PixelFormat fmts[] = {PixelFormat::Gray8, PixelFormat::Rgb8, PixelFormat::Bgr8,
                              PixelFormat::Yuv420p};
  for (int trial = 0; trial < 60; ++trial) {
    const FrameType t{static_cast<std::uint32_t>(2 * (1 + rng() % 8)),
                      static_cast<std::uint32_t>(2 * (1 + rng() % 8)), fmts[rng() % 4]};
    const auto n = static_cast<std::uint32_t>(1 + rng() % 12);
    std::vector<Raster> frames;
    for (std::uint32_t i = 0; i < n; ++i) frames.push_back(random_raster(rng, t, trial % 2 ? 4 : 256));
    const auto gop = static_cast<std::uint32_t>(1 + rng() % 6);
    const bool b = rng() % 2;
    CHECK(decode_all(encode_tvc(frames, EncoderParams{30, 1, gop, b})) == frames);
  }
}

TEST_CASE("decoding the last frame of a 300-frame P chain takes 300 steps") {
  const FrameType t{4, 4, PixelFormat::Gray8};
  auto src = testing::synthetic_source(t, 300, 300, false);
  std::uint64_t steps = 0;
  auto f = decode_frame(*src, 299, &steps);
  CHECK(steps == 300);
  CHECK(*f == synthetic_frame(t, 299, 0));
  steps = 0;
  decode_frame(*src, 0, &steps);
  CHECK(steps == 1);
}

TEST_CASE("decode amplification equals the decode-order prefix length") {
  const FrameType t{4, 4, PixelFormat::Gray8};
  for (bool b : {false, true}) {
    auto src = testing::synthetic_source(t, 45, 15, b);
    const auto order = expected_order(15, b);
    for (std::uint32_t f = 0; f < 45; ++f) {
      std::uint64_t steps = 0;
      decode_frame(*src, f, &steps);
      const auto pos = std::find(order.begin(), order.end(), f % 15) - order.begin();
      CHECK(steps == static_cast<std::uint64_t>(pos + 1));
    }
  }
}

TEST_CASE("a GOP decodes from its own bytes alone") {
  const FrameType t{8, 6, PixelFormat::Yuv420p};
  MemorySource src(testing::synthetic_stream(t, 20, 7, true));
  for (std::uint32_t g = 0; g < src.info().gops.size(); ++g) {
    const GopData d = src.gop_data(g);
    CHECK(d.bytes.size() == src.info().gop_end(g) - src.info().gops[g].byte_offset);
    auto copy = std::make_shared<std::vector<std::uint8_t>>(d.bytes.begin(), d.bytes.end());
    GopDecoder dec(t, g, src.info().gops[g], GopData{copy, *copy});
    while (!dec.finished()) {
      auto f = dec.step();
      CHECK(*f.raster == synthetic_frame(t, f.presentation_index, 0));
    }
  }
}

TEST_CASE("corrupt records are reported") {
  const FrameType t{4, 4, PixelFormat::Gray8};
  auto bytes = testing::synthetic_stream(t, 4, 4, false);
  const std::size_t first = 25 + 16;
  {
    auto bad = bytes;
    bad[first] = 7;
    MemorySource src(bad);
    auto dec = src.open_gop(0);
    CHECK_THROWS_WITH_AS(dec.step(), doctest::Contains("bad frame kind"), CodecError);
  }
  {
    auto bad = bytes;
    bad[first] = 1;
    MemorySource src(bad);
    auto dec = src.open_gop(0);
    CHECK_THROWS_AS(dec.step(), CodecError);
  }
  {
    auto bad = bytes;
    bad[first + 5] += 2;  // payload length no longer matches the RLE data
    MemorySource src(bad);
    auto dec = src.open_gop(0);
    CHECK_THROWS_AS(dec.step(), CodecError);
  }
  {
    auto bad = bytes;
    bad.resize(bad.size() - 3);
    MemorySource src(bad);
    auto dec = src.open_gop(0);
    dec.step();
    dec.step();
    dec.step();
    CHECK_THROWS_WITH_AS(dec.step(), doctest::Contains("truncated"), CodecError);
  }
}

TEST_CASE("probe summarises GOPs without reading payloads") {
  const FrameType t{6, 4, PixelFormat::Bgr8};
  const auto bytes = testing::synthetic_stream(t, 10, 4, false);
  RecordingReader reader(bytes);
  const TvcInfo info = probe(reader);
  CHECK(reader.max_end == 25 + 3 * 16);
  CHECK(info.header.width == 6);
  CHECK(info.header.height == 4);
  CHECK(info.header.pixfmt == PixelFormat::Bgr8);
  CHECK(info.header.frame_count == 10);
  REQUIRE(info.gops.size() == 3);
  CHECK(info.gops[0].first_presentation_index == 0);
  CHECK(info.gops[0].frames_in_gop == 4);
  CHECK(info.gops[1].first_presentation_index == 4);
  CHECK(info.gops[1].frames_in_gop == 4);
  CHECK(info.gops[2].first_presentation_index == 8);
  CHECK(info.gops[2].frames_in_gop == 2);
  CHECK(info.gop_of(7) == 1);
  CHECK(info.gop_of(9) == 2);
  CHECK_THROWS_AS(info.gop_of(10), CodecError);
}

TEST_CASE("probe errors") {
  CHECK_THROWS_WITH_AS(probe(std::span<const std::uint8_t>()), doctest::Contains("bad magic"), CodecError);
  const std::vector<std::uint8_t> junk{'R', 'I', 'F', 'F', 0, 0, 0, 0};
  CHECK_THROWS_WITH_AS(probe(junk), doctest::Contains("bad magic"), CodecError);
  auto bytes = testing::synthetic_stream(FrameType{4, 4, PixelFormat::Gray8}, 10, 4, false);
  auto header_only = std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 20);
  CHECK_THROWS_AS(probe(header_only), CodecError);
  auto index_cut = std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 40);
  CHECK_THROWS_AS(probe(index_cut), CodecError);
}

TEST_CASE("encoder errors") {
  const FrameType t{4, 4, PixelFormat::Gray8};
  CHECK_THROWS_AS(encode_tvc(std::vector<Raster>{}, {}), CodecError);
  std::vector<Raster> mixed{Raster(t), Raster(FrameType{4, 4, PixelFormat::Rgb8})};
  CHECK_THROWS_AS(encode_tvc(mixed, {}), CodecError);
  CHECK_THROWS_AS(TvcEncoder(t, EncoderParams{30, 1, 0, false}), CodecError);
}

TEST_CASE("pixel format formulas") {
  CHECK(rgb_to_yuv({0, 0, 0}).y == 0);
  CHECK(rgb_to_yuv({0, 0, 0}).u == 128);
  CHECK(rgb_to_yuv({0, 0, 0}).v == 128);
  CHECK(rgb_to_yuv({255, 0, 0}).y == (77 * 255) >> 8);
  CHECK(rgb_to_yuv({255, 0, 0}).y == 76);
  // Independent evaluation of the stated formulas for every 17th color.
  for (int r = 0; r < 256; r += 17)
    for (int g = 0; g < 256; g += 17)
      for (int b = 0; b < 256; b += 17) {
        auto clamp = [](int v) { return std::clamp(v, 0, 255); };
        const Yuv y = rgb_to_yuv({std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)});
        CHECK(y.y == clamp((77 * r + 150 * g + 29 * b) >> 8));
        CHECK(y.u == clamp(((-43 * r - 85 * g + 128 * b) >> 8) + 128));
        CHECK(y.v == clamp(((128 * r - 107 * g - 21 * b) >> 8) + 128));
        const Rgb back = yuv_to_rgb({std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)});
        CHECK(back.r == clamp(r + ((359 * (b - 128)) >> 8)));
        CHECK(back.g == clamp(r - ((88 * (g - 128) + 183 * (b - 128)) >> 8)));
        CHECK(back.b == clamp(r + ((454 * (g - 128)) >> 8)));
      }
}

TEST_CASE("pixel format conversions on rasters") {
  std::mt19937_64 rng(3);
  const FrameType rgb{6, 4, PixelFormat::Rgb8};
  const Raster a = random_raster(rng, rgb);
  const Raster bgr = convert_pixfmt(a, PixelFormat::Bgr8);
  for (std::size_t i = 0; i < a.data.size(); i += 3) {
    CHECK(bgr.data[i] == a.data[i + 2]);
    CHECK(bgr.data[i + 2] == a.data[i]);
  }
  CHECK(convert_pixfmt(bgr, PixelFormat::Rgb8) == a);

  const Raster gray = convert_pixfmt(a, PixelFormat::Gray8);
  for (std::size_t p = 0; p < gray.data.size(); ++p)
    CHECK(gray.data[p] == rgb_to_yuv({a.data[3 * p], a.data[3 * p + 1], a.data[3 * p + 2]}).y);
  const Raster rep = convert_pixfmt(gray, PixelFormat::Rgb8);
  for (std::size_t p = 0; p < gray.data.size(); ++p)
    for (int c = 0; c < 3; ++c) CHECK(rep.data[3 * p + c] == gray.data[p]);

  const Raster yuv = convert_pixfmt(a, PixelFormat::Yuv420p);
  CHECK(yuv.type == FrameType{6, 4, PixelFormat::Yuv420p});
  // Chroma comes from the top-left pixel of each 2x2 block.
  for (std::uint32_t cy = 0; cy < 2; ++cy)
    for (std::uint32_t cx = 0; cx < 3; ++cx) {
      const std::size_t p = (2 * cy) * 6 + 2 * cx;
      const Yuv e = rgb_to_yuv({a.data[3 * p], a.data[3 * p + 1], a.data[3 * p + 2]});
      CHECK(yuv.plane(1)[cy * 3 + cx] == e.u);
      CHECK(yuv.plane(2)[cy * 3 + cx] == e.v);
    }
  const Raster back = convert_pixfmt(yuv, PixelFormat::Rgb8);
  for (std::uint32_t y = 0; y < 4; ++y)
    for (std::uint32_t x = 0; x < 6; ++x) {
      const Rgb e = yuv_to_rgb({yuv.plane(0)[y * 6 + x], yuv.plane(1)[(y / 2) * 3 + x / 2],
                                yuv.plane(2)[(y / 2) * 3 + x / 2]});
      const std::size_t p = 3 * (y * 6 + x);
      CHECK(back.data[p] == e.r);
      CHECK(back.data[p + 1] == e.g);
      CHECK(back.data[p + 2] == e.b);
    }

  const Raster yg = convert_pixfmt(yuv, PixelFormat::Gray8);
  CHECK(std::equal(yg.data.begin(), yg.data.end(), yuv.plane(0)));
  const Raster gy = convert_pixfmt(yg, PixelFormat::Yuv420p);
  CHECK(std::equal(yg.data.begin(), yg.data.end(), gy.plane(0)));
  CHECK(std::all_of(gy.plane(1), gy.plane(1) + 12, [](std::uint8_t v) { return v == 128; }));

  CHECK_THROWS_AS(convert_pixfmt(Raster(FrameType{3, 4, PixelFormat::Rgb8}), PixelFormat::Yuv420p),
                  std::invalid_argument);
  CHECK(convert_pixfmt(a, PixelFormat::Rgb8) == a);
}

TEST_CASE("synthetic fixture formula") {
  const FrameType g{8, 4, PixelFormat::Gray8};
  CHECK(synthetic_frame(g, 0, 0).data[0] == 0);
  CHECK(synthetic_frame(g, 1, 0).data[1 * 8 + 2] == 7);
  CHECK(synthetic_frame(g, 100, 9).data[3 * 8 + 5] == (5 + 6 + 300 + 9) % 256);
  const FrameType rgb{4, 4, PixelFormat::Rgb8};
  CHECK(synthetic_frame(rgb, 2, 1).data[(1 * 4 + 3) * 3 + 2] == (3 + 2 + 6 + 74 + 1) % 256);
  const FrameType yuv{4, 4, PixelFormat::Yuv420p};
  const Raster y = synthetic_frame(yuv, 0, 0);
  CHECK(y.plane(1)[1 * 2 + 1] == (1 + 2 + 37) % 256);
  CHECK(y.plane(2)[0] == 74);
  CHECK(synthetic_frame(yuv, 5, 3) == synthetic_frame(yuv, 5, 3));
}

TEST_CASE("pack_masks round trip and validation") {
  const std::uint32_t w = 12, h = 10;
  std::mt19937_64 rng(5);
  std::vector<Raster> masks;
  for (int i = 0; i < 9; ++i) {
    Raster m(FrameType{w, h, PixelFormat::Gray8});
    for (auto& b : m.data) b = rng() % 2 ? 255 : 0;
    masks.push_back(m);
  }
  const auto bytes = pack_masks(masks);
  CHECK(decode_all(bytes) == masks);
  CHECK(probe(bytes).header.pixfmt == PixelFormat::Gray8);
  CHECK(probe(bytes).gops.size() == 1);

  std::vector<Raster> same(5, masks[0]);
  const auto packed = pack_masks(same);
  const auto recs = walk_records(packed, 25 + 16, packed.size());
  REQUIRE(recs.size() == 5);
  for (int i = 1; i < 5; ++i)
    for (std::size_t k = 0; k < recs[i].len; k += 2) CHECK(packed[recs[i].at + k + 1] == 0);

  masks[3].data[0] = 17;
  CHECK_THROWS_AS(pack_masks(masks), CodecError);
  MaskPackOptions gray;
  gray.allow_gray = true;
  gray.gop_size = 4;
  CHECK(decode_all(pack_masks(masks, gray)) == masks);
}
