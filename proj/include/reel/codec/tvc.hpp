#pragma once

// TVC1 container: little-endian, keyframe-led closed GOPs.
//
//   header   "TVC1" | u16 width | u16 height | u8 pixfmt | u32 fps_num |
//            u32 fps_den | u32 frame_count | u32 gop_count           (25 bytes)
//   index    gop_count x { u64 byte_offset | u32 first_presentation_index |
//                          u32 frames_in_gop }                         (16 bytes each)
//   payload  per GOP, records in decode order:
//            { u8 kind (0=I,1=P,2=B) | u32 presentation_index |
//              u32 payload_len | payload }
//
// I payload: RLE of the raw planes. P payload: RLE of (frame - ref) mod 256
// where ref is the presentation-previous I/P frame. B payload: RLE of
// (frame - floor((prev + next) / 2)) mod 256 over the surrounding I/P frames.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reel/codec/raster.hpp"

namespace reel {

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FrameKind : std::uint8_t { I = 0, P = 1, B = 2 };

inline constexpr std::size_t kTvcHeaderSize = 25;
inline constexpr std::size_t kTvcGopEntrySize = 16;
inline constexpr std::size_t kTvcRecordHeaderSize = 9;

struct TvcHeader {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  PixelFormat pixfmt = PixelFormat::Gray8;
  std::uint32_t fps_num = 30;
  std::uint32_t fps_den = 1;
  std::uint32_t frame_count = 0;
  std::uint32_t gop_count = 0;

  FrameType frame_type() const { return FrameType{width, height, pixfmt}; }
};

struct GopEntry {
  std::uint64_t byte_offset = 0;
  std::uint32_t first_presentation_index = 0;
  std::uint32_t frames_in_gop = 0;
};

struct TvcInfo {
  TvcHeader header;
  std::vector<GopEntry> gops;
  std::uint64_t file_size = 0;

  /// GOP ordinal holding presentation frame `frame`; throws CodecError.
  std::uint32_t gop_of(std::uint32_t frame) const;
  /// One past the last byte of GOP `ordinal`.
  std::uint64_t gop_end(std::uint32_t ordinal) const;
};

/// Random-access byte input. `read` throws CodecError on out-of-range access.
class ByteReader {
 public:
  virtual ~ByteReader() = default;
  virtual std::uint64_t size() const = 0;
  virtual void read(std::uint64_t offset, std::span<std::uint8_t> out) const = 0;
};

class SpanReader final : public ByteReader {
 public:
  explicit SpanReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint64_t size() const override { return bytes_.size(); }
  void read(std::uint64_t offset, std::span<std::uint8_t> out) const override;

 private:
  std::span<const std::uint8_t> bytes_;
};

/// Parses header and GOP index without touching frame payloads.
TvcInfo probe(const ByteReader& reader);
TvcInfo probe(std::span<const std::uint8_t> bytes);

struct EncoderParams {
  std::uint32_t fps_num = 30;
  std::uint32_t fps_den = 1;
  std::uint32_t gop_size = 30;
  bool b_frames = false;
};

/// Per-position frame kinds for a GOP of `n` frames. With B-frames the
/// pattern is I,B,P,B,P,... and a trailing odd position becomes P, since GOPs
/// are closed and every B needs a following anchor.
std::vector<FrameKind> gop_frame_kinds(std::uint32_t n, bool b_frames);
/// Presentation offsets within the GOP in storage/decode order.
std::vector<std::uint32_t> gop_decode_order(std::uint32_t n, bool b_frames);

/// Streaming encoder; buffers at most one GOP of frames.
class TvcEncoder {
 public:
  TvcEncoder(FrameType type, EncoderParams params);

  /// Throws CodecError if `frame` does not match the encoder's frame type.
  void push(const Raster& frame);
  std::uint32_t frames_pushed() const { return frame_count_; }
  /// Throws CodecError if no frame was pushed.
  std::vector<std::uint8_t> finish();

 private:
  void flush_gop();

  FrameType type_;
  EncoderParams params_;
  std::vector<Raster> pending_;
  std::vector<std::uint8_t> payload_;
  std::vector<GopEntry> gops_;
  std::uint32_t frame_count_ = 0;
};

std::vector<std::uint8_t> encode_tvc(std::span<const Raster> frames, EncoderParams params);

/// A GOP's record bytes, kept alive by `owner`.
struct GopData {
  std::shared_ptr<const void> owner;
  std::span<const std::uint8_t> bytes;
};

struct DecodedFrame {
  std::uint32_t presentation_index = 0;
  FrameKind kind = FrameKind::I;
  RasterPtr raster;
};

/// Iterator over the frames of one GOP in decode order. Reads only the GOP's
/// own bytes.
class GopDecoder {
 public:
  GopDecoder(FrameType type, std::uint32_t ordinal, const GopEntry& entry, GopData data);

  /// Presentation indices not yet emitted.
  const std::set<std::uint32_t>& future() const { return future_; }
  bool finished() const { return future_.empty(); }
  std::uint32_t ordinal() const { return ordinal_; }
  std::uint32_t steps() const { return steps_; }

  /// Decodes the next record. Throws CodecError on corrupt data or when
  /// called after the GOP is exhausted.
  DecodedFrame step();

 private:
  [[noreturn]] void corrupt(const std::string& what) const;

  FrameType type_;
  std::uint32_t ordinal_;
  GopEntry entry_;
  GopData data_;
  std::size_t cursor_ = 0;
  std::set<std::uint32_t> future_;
  RasterPtr prev_anchor_;
  RasterPtr last_anchor_;
  std::uint32_t steps_ = 0;
};

/// A probed container whose GOPs can be fetched independently.
class VideoSource {
 public:
  virtual ~VideoSource() = default;
  virtual const TvcInfo& info() const = 0;
  virtual GopData gop_data(std::uint32_t ordinal) const = 0;

  GopDecoder open_gop(std::uint32_t ordinal) const;
};

using VideoSourcePtr = std::shared_ptr<const VideoSource>;

class MemorySource final : public VideoSource {
 public:
  explicit MemorySource(std::vector<std::uint8_t> bytes);

  const TvcInfo& info() const override { return info_; }
  GopData gop_data(std::uint32_t ordinal) const override;
  std::span<const std::uint8_t> bytes() const { return *bytes_; }

 private:
  std::shared_ptr<const std::vector<std::uint8_t>> bytes_;
  TvcInfo info_;
};

/// Decodes presentation frame `frame` the naive way: open its GOP and step
/// forward until it appears. `decoded` (if set) accumulates steps taken.
RasterPtr decode_frame(const VideoSource& source, std::uint32_t frame,
                       std::uint64_t* decoded = nullptr);

/// Decodes every frame in presentation order.
std::vector<Raster> decode_all(std::span<const std::uint8_t> container);

struct MaskPackOptions {
  std::uint32_t fps_num = 30;
  std::uint32_t fps_den = 1;
  std::uint32_t gop_size = 30;
  bool allow_gray = false;
};

/// Packs single-channel masks into a lossless GRAY8 stream, one mask per
/// frame. Rejects values other than 0/255 unless `allow_gray`.
std::vector<std::uint8_t> pack_masks(std::span<const Raster> masks, MaskPackOptions opts = {});

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace reel
