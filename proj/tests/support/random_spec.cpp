#include "random_spec.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace reel::testing {

const char* pattern_name(AccessPattern p) {
  switch (p) {
    case AccessPattern::Sequential: return "sequential";
    case AccessPattern::Reverse: return "reverse";
    case AccessPattern::Shuffle: return "shuffle";
    case AccessPattern::Stride: return "stride";
  }
  return "?";
}

std::vector<std::uint32_t> access_indices(AccessPattern pattern, std::uint32_t count,
                                          std::uint32_t n, std::uint32_t stride, std::uint64_t seed) {
  std::vector<std::uint32_t> out(count);
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  if (pattern == AccessPattern::Shuffle) {
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  for (std::uint32_t g = 0; g < count; ++g) {
    switch (pattern) {
      case AccessPattern::Sequential: out[g] = g % n; break;
      case AccessPattern::Reverse: out[g] = n - 1 - g % n; break;
      case AccessPattern::Shuffle: out[g] = perm[g % n]; break;
      case AccessPattern::Stride: out[g] = static_cast<std::uint32_t>((std::uint64_t{g} * stride) % n); break;
    }
  }
  return out;
}

namespace {

struct Builder {
  std::mt19937_64 rng;
  VideoSpec& spec;
  std::uint32_t w, h;

  std::int64_t uni(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  }
  bool coin(int percent) { return uni(0, 99) < percent; }
  Color color() {
    return Color{{static_cast<std::uint8_t>(uni(0, 255)), static_cast<std::uint8_t>(uni(0, 255)),
                  static_cast<std::uint8_t>(uni(0, 255))}};
  }
  /// A constant either inlined or shared through a Const node.
  Arg constant(Value v) {
    if (coin(25)) return spec.nodes.constant(std::move(v));
    return v;
  }
  NodeId convert(NodeId e, PixelFormat from, PixelFormat to) {
    if (from == to) return e;
    return spec.nodes.call("pixfmt", {e, Value(std::string(pixfmt_name(from))),
                                      Value(std::string(pixfmt_name(to)))});
  }
  NodeId crop(NodeId e, std::int64_t x, std::int64_t y, std::int64_t cw, std::int64_t ch) {
    return spec.nodes.call("crop", {e, Value(x), Value(y), Value(cw), Value(ch)});
  }
  std::int64_t even(std::int64_t lo, std::int64_t hi) { return uni(lo / 2, hi / 2) * 2; }
};

}  // namespace

VideoSpec random_spec(std::uint64_t seed, const std::vector<RandomSource>& sources,
                      const RandomSpecOptions& opt) {
  std::vector<const RandomSource*> images, masks;
  for (const auto& s : sources) (s.is_mask ? masks : images).push_back(&s);
  if (images.empty()) throw std::invalid_argument("random_spec needs an image source");
  const std::uint32_t w = images.front()->type.width, h = images.front()->type.height;
  for (const auto* s : images)
    if (s->type.width != w || s->type.height != h || w % 4 || h % 4)
      throw std::invalid_argument("image sources must share a resolution divisible by 4");

  VideoSpec spec;
  spec.spec_id = "random-" + std::to_string(seed);
  spec.output_type = FrameType{w, h, opt.output_pixfmt};
  Builder b{std::mt19937_64(seed), spec, w, h};

  std::vector<std::vector<std::uint32_t>> index;
  for (std::size_t i = 0; i < sources.size(); ++i)
    index.push_back(access_indices(opt.pattern, opt.frames, sources[i].frames, opt.stride, seed + i));
  auto source_pos = [&](const RandomSource* s) { return static_cast<std::size_t>(s - sources.data()); };

  static const PixelFormat kDrawable[] = {PixelFormat::Gray8, PixelFormat::Rgb8, PixelFormat::Bgr8};
  static const char kChars[] = "ABCXYZ0123456789 !?.:-";

  for (std::uint32_t g = 0; g < opt.frames; ++g) {
    const RandomSource* primary = images[b.uni(0, images.size() - 1)];
    NodeId e = spec.nodes.source(primary->id, index[source_pos(primary)][g]);
    PixelFormat fmt = primary->type.pixfmt;
    PixelFormat work = fmt;
    if (!is_interleaved(work)) work = kDrawable[b.uni(0, 2)];
    e = b.convert(e, fmt, work);

    const auto ops = b.uni(0, opt.max_ops);
    for (std::int64_t op = 0; op < ops; ++op) {
      switch (b.uni(0, 7)) {
        case 0: {
          const IntPair p1{b.uni(-8, w + 8), b.uni(-8, h + 8)};
          const IntPair p2{b.uni(-8, w + 8), b.uni(-8, h + 8)};
          static const std::int64_t kThick[] = {-1, 1, 2, 3};
          e = spec.nodes.call("draw_rectangle", {e, b.constant(p1), b.constant(p2),
                                                 b.constant(b.color()), Value(kThick[b.uni(0, 3)])});
          break;
        }
        case 1: {
          std::string text;
          for (auto n = b.uni(0, 6); n > 0; --n) text += kChars[b.uni(0, sizeof(kChars) - 2)];
          e = spec.nodes.call("draw_text", {e, b.constant(Value(text)),
                                            Value(IntPair{b.uni(-4, w), b.uni(0, h + 8)}),
                                            Value(b.uni(1, 2)), b.constant(b.color())});
          break;
        }
        case 2: {
          if (!opt.masks || masks.empty()) break;
          const RandomSource* m = masks[b.uni(0, masks.size() - 1)];
          if (m->type.width != w || m->type.height != h) break;
          const NodeId mask = spec.nodes.source(m->id, index[source_pos(m)][g]);
          e = spec.nodes.call("overlay_mask",
                              {e, mask, b.constant(b.color()), Value(b.uni(0, 255))});
          break;
        }
        case 3:
        case 4: {
          const bool horizontal = b.uni(0, 1) == 0;
          NodeId other;
          if (opt.cross_source && images.size() > 1 && b.coin(70)) {
            const RandomSource* s = images[b.uni(0, images.size() - 1)];
            other = b.convert(spec.nodes.source(s->id, index[source_pos(s)][g]), s->type.pixfmt, work);
          } else {
            other = spec.nodes.call("solid", {Value(std::int64_t{w}), Value(std::int64_t{h}),
                                              Value(std::string(pixfmt_name(work))),
                                              b.constant(b.color())});
          }
          if (horizontal) {
            const auto cut = b.even(2, w - 2);
            e = spec.nodes.call("hstack", {b.crop(e, 0, 0, cut, h), b.crop(other, cut, 0, w - cut, h)});
          } else {
            const auto cut = b.even(2, h - 2);
            e = spec.nodes.call("vstack", {b.crop(e, 0, 0, w, cut), b.crop(other, 0, cut, w, h - cut)});
          }
          break;
        }
        case 5: {
          const auto cw = b.even(2, w), ch = b.even(2, h);
          const auto x = b.even(0, w - cw), y = b.even(0, h - ch);
          e = spec.nodes.call("scale_nearest",
                              {b.crop(e, x, y, cw, ch), Value(std::int64_t{w}), Value(std::int64_t{h})});
          break;
        }
        case 6: {
          const PixelFormat via = b.coin(50) ? PixelFormat::Yuv420p : kDrawable[b.uni(0, 2)];
          e = b.convert(b.convert(e, work, via), via, work);
          break;
        }
        default: {
          const PixelFormat next = kDrawable[b.uni(0, 2)];
          e = b.convert(e, work, next);
          work = next;
          break;
        }
      }
    }
    e = b.convert(e, work, opt.output_pixfmt);
    spec.append_frame(e);
  }
  spec.terminate();
  return spec;
}

}  // namespace reel::testing
