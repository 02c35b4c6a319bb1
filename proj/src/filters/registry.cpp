#include "reel/filters/registry.hpp"

#include <functional>
#include <map>
#include <string>

#include "reel/filters/filters.hpp"

namespace reel::filters {

namespace {

using PK = ParamKind;

const FrameType& frame_at(std::span<const TypedArg> a, std::size_t i) {
  return std::get<FrameType>(a[i]);
}
const Value& value_at(std::span<const TypedArg> a, std::size_t i) { return std::get<Value>(a[i]); }
std::int64_t int_at(std::span<const TypedArg> a, std::size_t i) {
  return value_at(a, i).as<std::int64_t>();
}

[[noreturn]] void fail(TypeErrorKind kind, std::string detail) {
  throw RuleError{kind, std::move(detail)};
}

void require_drawable(const FrameType& t) {
  if (!is_interleaved(t.pixfmt))
    fail(TypeErrorKind::FrameTypeMismatch,
         "needs a gray8, rgb8 or bgr8 frame, got " + t.to_string());
}

PixelFormat pixfmt_arg(const Value& v, const char* what) {
  auto fmt = parse_pixfmt(v.as<std::string>());
  if (!fmt) fail(TypeErrorKind::InvalidArgument, std::string(what) + ": unknown pixel format '" +
                                                     v.as<std::string>() + "'");
  return *fmt;
}

FrameType make_type(std::int64_t w, std::int64_t h, PixelFormat fmt, TypeErrorKind kind) {
  if (w < 1 || h < 1 || w > UINT32_MAX || h > UINT32_MAX)
    fail(TypeErrorKind::InvalidArgument,
         "dimensions " + std::to_string(w) + "x" + std::to_string(h) + " out of range");
  FrameType t{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h), fmt};
  if (!t.valid()) fail(kind, t.to_string() + " is not a valid frame type");
  return t;
}

FrameType derive_pixfmt(std::span<const TypedArg> a) {
  const FrameType& in = frame_at(a, 0);
  const PixelFormat from = pixfmt_arg(value_at(a, 1), "from");
  const PixelFormat to = pixfmt_arg(value_at(a, 2), "to");
  if (in.pixfmt != from)
    fail(TypeErrorKind::FrameTypeMismatch, "input is " + in.to_string() + ", declared from=" +
                                               std::string(pixfmt_name(from)));
  return make_type(in.width, in.height, to, TypeErrorKind::FrameTypeMismatch);
}

FrameType derive_rectangle(std::span<const TypedArg> a) {
  const FrameType& in = frame_at(a, 0);
  require_drawable(in);
  const auto t = int_at(a, 4);
  if (t == 0 || t < -1)
    fail(TypeErrorKind::InvalidArgument, "thickness must be >= 1 or -1, got " + std::to_string(t));
  return in;
}

FrameType derive_text(std::span<const TypedArg> a) {
  const FrameType& in = frame_at(a, 0);
  require_drawable(in);
  if (int_at(a, 3) < 1)
    fail(TypeErrorKind::InvalidArgument, "scale must be >= 1, got " + std::to_string(int_at(a, 3)));
  return in;
}

FrameType derive_crop(std::span<const TypedArg> a) {
  const FrameType& in = frame_at(a, 0);
  const auto x = int_at(a, 1), y = int_at(a, 2), w = int_at(a, 3), h = int_at(a, 4);
  if (x < 0 || y < 0 || w < 1 || h < 1 || x > std::int64_t{in.width} - w ||
      y > std::int64_t{in.height} - h)
    fail(TypeErrorKind::InvalidArgument, "crop window (" + std::to_string(x) + "," +
                                             std::to_string(y) + "," + std::to_string(w) + "," +
                                             std::to_string(h) + ") outside " + in.to_string());
  if (in.pixfmt == PixelFormat::Yuv420p && (x % 2 || y % 2 || w % 2 || h % 2))
    fail(TypeErrorKind::InvalidArgument, "yuv420p crop window must be even-aligned");
  return make_type(w, h, in.pixfmt, TypeErrorKind::InvalidArgument);
}

FrameType derive_scale(std::span<const TypedArg> a) {
  const FrameType& in = frame_at(a, 0);
  return make_type(int_at(a, 1), int_at(a, 2), in.pixfmt, TypeErrorKind::InvalidArgument);
}

FrameType derive_hstack(std::span<const TypedArg> a) {
  const FrameType& l = frame_at(a, 0);
  const FrameType& r = frame_at(a, 1);
  if (l.pixfmt != r.pixfmt || l.height != r.height)
    fail(TypeErrorKind::FrameTypeMismatch,
         "needs equal heights and formats, got " + l.to_string() + " and " + r.to_string());
  return make_type(std::int64_t{l.width} + r.width, l.height, l.pixfmt,
                   TypeErrorKind::FrameTypeMismatch);
}

FrameType derive_vstack(std::span<const TypedArg> a) {
  const FrameType& t = frame_at(a, 0);
  const FrameType& b = frame_at(a, 1);
  if (t.pixfmt != b.pixfmt || t.width != b.width)
    fail(TypeErrorKind::FrameTypeMismatch,
         "needs equal widths and formats, got " + t.to_string() + " and " + b.to_string());
  return make_type(t.width, std::int64_t{t.height} + b.height, t.pixfmt,
                   TypeErrorKind::FrameTypeMismatch);
}

FrameType derive_overlay(std::span<const TypedArg> a) {
  const FrameType& in = frame_at(a, 0);
  const FrameType& mask = frame_at(a, 1);
  require_drawable(in);
  if (mask.pixfmt != PixelFormat::Gray8 || mask.width != in.width || mask.height != in.height)
    fail(TypeErrorKind::FrameTypeMismatch,
         "mask " + mask.to_string() + " must be gray8 at the frame's resolution " + in.to_string());
  const auto alpha = int_at(a, 3);
  if (alpha < 0 || alpha > 255)
    fail(TypeErrorKind::InvalidArgument, "alpha must be in 0..255, got " + std::to_string(alpha));
  return in;
}

FrameType derive_solid(std::span<const TypedArg> a) {
  return make_type(int_at(a, 0), int_at(a, 1), pixfmt_arg(value_at(a, 2), "pixfmt"),
                   TypeErrorKind::InvalidArgument);
}

const Raster& frame_of(std::span<const EvalArg> a, std::size_t i) { return *std::get<RasterPtr>(a[i]); }
const Value& val_of(std::span<const EvalArg> a, std::size_t i) { return std::get<Value>(a[i]); }
std::int64_t int_of(std::span<const EvalArg> a, std::size_t i) {
  return val_of(a, i).as<std::int64_t>();
}
PixelFormat fmt_of(std::span<const EvalArg> a, std::size_t i) {
  auto f = parse_pixfmt(val_of(a, i).as<std::string>());
  if (!f) throw FilterError("unknown pixel format '" + val_of(a, i).as<std::string>() + "'");
  return *f;
}

using EvalFn = std::function<Raster(std::span<const EvalArg>)>;

struct Entry {
  FilterSignature sig;
  EvalFn eval;
};

const std::map<std::string, Entry, std::less<>>& entries() {
  static const auto* table = [] {
    auto* m = new std::map<std::string, Entry, std::less<>>;
    auto add = [&](std::string name, std::vector<PK> params,
                   std::function<FrameType(std::span<const TypedArg>)> derive, EvalFn eval) {
      Entry e{FilterSignature{name, std::move(params), std::move(derive)}, std::move(eval)};
      m->emplace(std::move(name), std::move(e));
    };
    add("pixfmt", {PK::Frame, PK::Str, PK::Str}, derive_pixfmt, [](auto a) {
      return pixfmt(frame_of(a, 0), fmt_of(a, 1), fmt_of(a, 2));
    });
    add("draw_rectangle", {PK::Frame, PK::IntPair, PK::IntPair, PK::Color, PK::Int},
        derive_rectangle, [](auto a) {
          return draw_rectangle(frame_of(a, 0), val_of(a, 1).template as<IntPair>(),
                                val_of(a, 2).template as<IntPair>(),
                                val_of(a, 3).template as<Color>(), int_of(a, 4));
        });
    add("draw_text", {PK::Frame, PK::Str, PK::IntPair, PK::Int, PK::Color}, derive_text,
        [](auto a) {
          return draw_text(frame_of(a, 0), val_of(a, 1).template as<std::string>(),
                           val_of(a, 2).template as<IntPair>(), int_of(a, 3),
                           val_of(a, 4).template as<Color>());
        });
    add("crop", {PK::Frame, PK::Int, PK::Int, PK::Int, PK::Int}, derive_crop, [](auto a) {
      return crop(frame_of(a, 0), int_of(a, 1), int_of(a, 2), int_of(a, 3), int_of(a, 4));
    });
    add("scale_nearest", {PK::Frame, PK::Int, PK::Int}, derive_scale,
        [](auto a) { return scale_nearest(frame_of(a, 0), int_of(a, 1), int_of(a, 2)); });
    add("hstack", {PK::Frame, PK::Frame}, derive_hstack,
        [](auto a) { return hstack(frame_of(a, 0), frame_of(a, 1)); });
    add("vstack", {PK::Frame, PK::Frame}, derive_vstack,
        [](auto a) { return vstack(frame_of(a, 0), frame_of(a, 1)); });
    add("overlay_mask", {PK::Frame, PK::Frame, PK::Color, PK::Int}, derive_overlay, [](auto a) {
      return overlay_mask(frame_of(a, 0), frame_of(a, 1), val_of(a, 2).template as<Color>(),
                          int_of(a, 3));
    });
    add("solid", {PK::Int, PK::Int, PK::Str, PK::Color}, derive_solid, [](auto a) {
      return solid(int_of(a, 0), int_of(a, 1), fmt_of(a, 2), val_of(a, 3).template as<Color>());
    });
    return m;
  }();
  return *table;
}

}  // namespace

const SignatureTable& signature_table() {
  static const SignatureTable table = [] {
    SignatureTable t;
    for (const auto& [name, e] : entries()) t.emplace(name, e.sig);
    return t;
  }();
  return table;
}

Raster apply_filter(std::string_view name, std::span<const EvalArg> args) {
  const auto& m = entries();
  auto it = m.find(name);
  if (it == m.end()) throw FilterError("unknown filter '" + std::string(name) + "'");
  if (args.size() != it->second.sig.params.size())
    throw FilterError(std::string(name) + ": wrong argument count");
  return it->second.eval(args);
}

}  // namespace reel::filters
