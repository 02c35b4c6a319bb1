#include "reel/codec/tvc.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "reel/codec/rle.hpp"

namespace reel {

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
         (std::uint32_t{p[3]} << 24);
}

std::uint64_t get_u64(const std::uint8_t* p) {
  return std::uint64_t{get_u32(p)} | (std::uint64_t{get_u32(p + 4)} << 32);
}

void encode_record(std::vector<std::uint8_t>& out, FrameKind kind, std::uint32_t pres,
                   std::span<const std::uint8_t> raw) {
  put_u8(out, static_cast<std::uint8_t>(kind));
  put_u32(out, pres);
  const std::size_t len_at = out.size();
  put_u32(out, 0);
  const std::size_t start = out.size();
  rle::encode_into(raw, out);
  const auto len = static_cast<std::uint32_t>(out.size() - start);
  for (int i = 0; i < 4; ++i) out[len_at + i] = static_cast<std::uint8_t>(len >> (8 * i));
}

std::vector<std::uint8_t> delta(const std::vector<std::uint8_t>& cur,
                                const std::vector<std::uint8_t>& ref) {
  std::vector<std::uint8_t> d(cur.size());
  for (std::size_t i = 0; i < cur.size(); ++i) d[i] = static_cast<std::uint8_t>(cur[i] - ref[i]);
  return d;
}

std::vector<std::uint8_t> floor_average(const std::vector<std::uint8_t>& a,
                                        const std::vector<std::uint8_t>& b) {
  std::vector<std::uint8_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = static_cast<std::uint8_t>((unsigned{a[i]} + unsigned{b[i]}) / 2);
  return out;
}

}  // namespace

void SpanReader::read(std::uint64_t offset, std::span<std::uint8_t> out) const {
  if (offset > bytes_.size() || out.size() > bytes_.size() - offset)
    throw CodecError("read of " + std::to_string(out.size()) + " bytes at offset " +
                     std::to_string(offset) + " past end of " + std::to_string(bytes_.size()));
  std::memcpy(out.data(), bytes_.data() + offset, out.size());
}

std::uint32_t TvcInfo::gop_of(std::uint32_t frame) const {
  if (frame >= header.frame_count)
    throw CodecError("frame " + std::to_string(frame) + " out of range (" +
                     std::to_string(header.frame_count) + " frames)");
  auto it = std::upper_bound(gops.begin(), gops.end(), frame,
                             [](std::uint32_t f, const GopEntry& g) {
                               return f < g.first_presentation_index;
                             });
  return static_cast<std::uint32_t>(std::distance(gops.begin(), it) - 1);
}

std::uint64_t TvcInfo::gop_end(std::uint32_t ordinal) const {
  return ordinal + 1 < gops.size() ? gops[ordinal + 1].byte_offset : file_size;
}

TvcInfo probe(const ByteReader& reader) {
  TvcInfo info;
  info.file_size = reader.size();
  if (reader.size() < 4) throw CodecError("bad magic: input too short");
  std::uint8_t head[kTvcHeaderSize];
  reader.read(0, std::span(head, 4));
  if (std::memcmp(head, "TVC1", 4) != 0) throw CodecError("bad magic");
  if (reader.size() < kTvcHeaderSize) throw CodecError("truncated header");
  reader.read(0, std::span(head, kTvcHeaderSize));
  TvcHeader& h = info.header;
  h.width = get_u16(head + 4);
  h.height = get_u16(head + 6);
  if (head[8] > 3) throw CodecError("unknown pixfmt code " + std::to_string(head[8]));
  h.pixfmt = static_cast<PixelFormat>(head[8]);
  h.fps_num = get_u32(head + 9);
  h.fps_den = get_u32(head + 13);
  h.frame_count = get_u32(head + 17);
  h.gop_count = get_u32(head + 21);
  if (!h.frame_type().valid()) throw CodecError("invalid frame type " + h.frame_type().to_string());
  if (h.fps_num == 0 || h.fps_den == 0) throw CodecError("invalid frame rate");

  const std::uint64_t index_end = kTvcHeaderSize + std::uint64_t{h.gop_count} * kTvcGopEntrySize;
  if (reader.size() < index_end) throw CodecError("truncated gop index");
  std::vector<std::uint8_t> index(index_end - kTvcHeaderSize);
  reader.read(kTvcHeaderSize, index);
  info.gops.resize(h.gop_count);
  std::uint32_t expect_first = 0;
  for (std::uint32_t g = 0; g < h.gop_count; ++g) {
    const std::uint8_t* p = index.data() + std::size_t{g} * kTvcGopEntrySize;
    GopEntry& e = info.gops[g];
    e.byte_offset = get_u64(p);
    e.first_presentation_index = get_u32(p + 8);
    e.frames_in_gop = get_u32(p + 12);
    const std::uint64_t min_offset = g == 0 ? index_end : info.gops[g - 1].byte_offset + kTvcRecordHeaderSize;
    if (e.byte_offset < min_offset || e.byte_offset >= reader.size() ||
        (g == 0 && e.byte_offset != index_end))
      throw CodecError("gop " + std::to_string(g) + " offset out of order or out of range");
    if (e.first_presentation_index != expect_first || e.frames_in_gop == 0)
      throw CodecError("gop " + std::to_string(g) + " does not continue the presentation range");
    expect_first += e.frames_in_gop;
  }
  if (expect_first != h.frame_count)
    throw CodecError("gop index covers " + std::to_string(expect_first) + " frames, header says " +
                     std::to_string(h.frame_count));
  return info;
}

TvcInfo probe(std::span<const std::uint8_t> bytes) { return probe(SpanReader(bytes)); }

std::vector<FrameKind> gop_frame_kinds(std::uint32_t n, bool b_frames) {
  std::vector<FrameKind> kinds(n, FrameKind::P);
  if (n > 0) kinds[0] = FrameKind::I;
  if (b_frames)
    for (std::uint32_t k = 1; k + 1 < n; k += 2) kinds[k] = FrameKind::B;
  return kinds;
}

std::vector<std::uint32_t> gop_decode_order(std::uint32_t n, bool b_frames) {
  const auto kinds = gop_frame_kinds(n, b_frames);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  if (n > 0) order.push_back(0);
  for (std::uint32_t k = 1; k < n; ++k) {
    if (kinds[k] != FrameKind::P) continue;
    order.push_back(k);
    if (kinds[k - 1] == FrameKind::B) order.push_back(k - 1);
  }
  return order;
}

TvcEncoder::TvcEncoder(FrameType type, EncoderParams params) : type_(type), params_(params) {
  if (!type.valid()) throw CodecError("invalid frame type " + type.to_string());
  if (type.width > 0xffff || type.height > 0xffff)
    throw CodecError("frame dimensions exceed 16 bits");
  if (params.gop_size == 0) throw CodecError("gop_size must be at least 1");
  if (params.fps_num == 0 || params.fps_den == 0) throw CodecError("invalid frame rate");
}

void TvcEncoder::push(const Raster& frame) {
  if (frame.type != type_)
    throw CodecError("frame type " + frame.type.to_string() + " does not match stream type " +
                     type_.to_string());
  pending_.push_back(frame);
  ++frame_count_;
  if (pending_.size() == params_.gop_size) flush_gop();
}

void TvcEncoder::flush_gop() {
  if (pending_.empty()) return;
  const auto n = static_cast<std::uint32_t>(pending_.size());
  const std::uint32_t first = frame_count_ - n;
  gops_.push_back(GopEntry{payload_.size(), first, n});
  const auto kinds = gop_frame_kinds(n, params_.b_frames);
  const auto order = gop_decode_order(n, params_.b_frames);
  std::uint32_t last_anchor = 0;
  for (const std::uint32_t k : order) {
    const auto& cur = pending_[k].data;
    switch (kinds[k]) {
      case FrameKind::I:
        encode_record(payload_, FrameKind::I, first + k, cur);
        last_anchor = k;
        break;
      case FrameKind::P:
        encode_record(payload_, FrameKind::P, first + k, delta(cur, pending_[last_anchor].data));
        last_anchor = k;
        break;
      case FrameKind::B:
        encode_record(payload_, FrameKind::B, first + k,
                      delta(cur, floor_average(pending_[k - 1].data, pending_[k + 1].data)));
        break;
    }
  }
  pending_.clear();
}

std::vector<std::uint8_t> TvcEncoder::finish() {
  flush_gop();
  if (frame_count_ == 0) throw CodecError("cannot encode an empty frame sequence");
  std::vector<std::uint8_t> out;
  const std::uint64_t base = kTvcHeaderSize + gops_.size() * kTvcGopEntrySize;
  out.reserve(base + payload_.size());
  for (const char c : {'T', 'V', 'C', '1'}) out.push_back(static_cast<std::uint8_t>(c));
  put_u16(out, static_cast<std::uint16_t>(type_.width));
  put_u16(out, static_cast<std::uint16_t>(type_.height));
  put_u8(out, static_cast<std::uint8_t>(type_.pixfmt));
  put_u32(out, params_.fps_num);
  put_u32(out, params_.fps_den);
  put_u32(out, frame_count_);
  put_u32(out, static_cast<std::uint32_t>(gops_.size()));
  for (const auto& g : gops_) {
    put_u64(out, base + g.byte_offset);
    put_u32(out, g.first_presentation_index);
    put_u32(out, g.frames_in_gop);
  }
  out.insert(out.end(), payload_.begin(), payload_.end());
  payload_.clear();
  gops_.clear();
  return out;
}

std::vector<std::uint8_t> encode_tvc(std::span<const Raster> frames, EncoderParams params) {
  if (frames.empty()) throw CodecError("cannot encode an empty frame sequence");
  TvcEncoder enc(frames.front().type, params);
  for (const auto& f : frames) enc.push(f);
  return enc.finish();
}

GopDecoder::GopDecoder(FrameType type, std::uint32_t ordinal, const GopEntry& entry, GopData data)
    : type_(type), ordinal_(ordinal), entry_(entry), data_(std::move(data)) {
  for (std::uint32_t i = 0; i < entry.frames_in_gop; ++i)
    future_.insert(entry.first_presentation_index + i);
}

void GopDecoder::corrupt(const std::string& what) const {
  throw CodecError("corrupt gop " + std::to_string(ordinal_) + " record " +
                   std::to_string(steps_) + ": " + what);
}

DecodedFrame GopDecoder::step() {
  if (future_.empty()) throw CodecError("gop " + std::to_string(ordinal_) + " already exhausted");
  const auto bytes = data_.bytes;
  if (bytes.size() - cursor_ < kTvcRecordHeaderSize) corrupt("truncated record header");
  const std::uint8_t* p = bytes.data() + cursor_;
  if (p[0] > 2) corrupt("bad frame kind " + std::to_string(p[0]));
  const auto kind = static_cast<FrameKind>(p[0]);
  const std::uint32_t pres = get_u32(p + 1);
  const std::uint32_t len = get_u32(p + 5);
  if (bytes.size() - cursor_ - kTvcRecordHeaderSize < len) corrupt("truncated payload");
  if (!future_.contains(pres))
    corrupt("presentation index " + std::to_string(pres) + " outside gop or repeated");
  if (steps_ == 0 && kind != FrameKind::I) corrupt("gop does not start with an I frame");
  if (steps_ > 0 && kind == FrameKind::I) corrupt("I frame inside gop");
  if (kind == FrameKind::B && !prev_anchor_) corrupt("B frame without two anchors");

  auto out = std::make_shared<Raster>();
  out->type = type_;
  out->data.resize(type_.byte_size());
  if (!rle::decode(std::span(p + kTvcRecordHeaderSize, len), out->data))
    corrupt("rle length mismatch");
  if (kind == FrameKind::P) {
    const auto& ref = last_anchor_->data;
    for (std::size_t i = 0; i < out->data.size(); ++i)
      out->data[i] = static_cast<std::uint8_t>(out->data[i] + ref[i]);
  } else if (kind == FrameKind::B) {
    const auto& a = prev_anchor_->data;
    const auto& b = last_anchor_->data;
    for (std::size_t i = 0; i < out->data.size(); ++i)
      out->data[i] = static_cast<std::uint8_t>(out->data[i] + (unsigned{a[i]} + unsigned{b[i]}) / 2);
  }
  cursor_ += kTvcRecordHeaderSize + len;
  future_.erase(pres);
  ++steps_;
  RasterPtr result = std::move(out);
  if (kind != FrameKind::B) {
    prev_anchor_ = std::move(last_anchor_);
    last_anchor_ = result;
  }
  if (future_.empty()) {
    prev_anchor_.reset();
    last_anchor_.reset();
  }
  return DecodedFrame{pres, kind, std::move(result)};
}

GopDecoder VideoSource::open_gop(std::uint32_t ordinal) const {
  const TvcInfo& i = info();
  if (ordinal >= i.gops.size())
    throw CodecError("gop " + std::to_string(ordinal) + " out of range (" +
                     std::to_string(i.gops.size()) + " gops)");
  return GopDecoder(i.header.frame_type(), ordinal, i.gops[ordinal], gop_data(ordinal));
}

MemorySource::MemorySource(std::vector<std::uint8_t> bytes)
    : bytes_(std::make_shared<const std::vector<std::uint8_t>>(std::move(bytes))),
      info_(probe(*bytes_)) {}

GopData MemorySource::gop_data(std::uint32_t ordinal) const {
  const auto begin = info_.gops.at(ordinal).byte_offset;
  const auto end = info_.gop_end(ordinal);
  return GopData{bytes_, std::span(*bytes_).subspan(begin, end - begin)};
}

RasterPtr decode_frame(const VideoSource& source, std::uint32_t frame, std::uint64_t* decoded) {
  GopDecoder dec = source.open_gop(source.info().gop_of(frame));
  while (!dec.finished()) {
    DecodedFrame f = dec.step();
    if (decoded) ++*decoded;
    if (f.presentation_index == frame) return f.raster;
  }
  throw CodecError("frame " + std::to_string(frame) + " not found in its gop");
}

std::vector<Raster> decode_all(std::span<const std::uint8_t> container) {
  MemorySource src(std::vector<std::uint8_t>(container.begin(), container.end()));
  const TvcInfo& info = src.info();
  std::vector<Raster> out(info.header.frame_count);
  for (std::uint32_t g = 0; g < info.gops.size(); ++g) {
    GopDecoder dec = src.open_gop(g);
    while (!dec.finished()) {
      DecodedFrame f = dec.step();
      out[f.presentation_index] = *f.raster;
    }
  }
  return out;
}

std::vector<std::uint8_t> pack_masks(std::span<const Raster> masks, MaskPackOptions opts) {
  if (masks.empty()) throw CodecError("no masks to pack");
  const FrameType t = masks.front().type;
  if (t.pixfmt != PixelFormat::Gray8) throw CodecError("masks must be gray8");
  TvcEncoder enc(t, EncoderParams{opts.fps_num, opts.fps_den, opts.gop_size, false});
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const Raster& m = masks[i];
    if (m.type != t)
      throw CodecError("mask " + std::to_string(i) + " has type " + m.type.to_string() +
                       ", expected " + t.to_string());
    if (!opts.allow_gray &&
        std::any_of(m.data.begin(), m.data.end(), [](std::uint8_t v) { return v != 0 && v != 255; }))
      throw CodecError("mask " + std::to_string(i) + " has values other than 0/255");
    enc.push(m);
  }
  return enc.finish();
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::uint8_t> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (!in) throw std::runtime_error("short read on " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write on " + path.string());
}

}  // namespace reel
