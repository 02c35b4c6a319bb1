#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "reel/codec/tvc.hpp"

namespace reel {

/// Receives output frames strictly in order.
class FrameSink {
 public:
  virtual ~FrameSink() = default;
  virtual void begin(const FrameType& /*type*/) {}
  virtual void consume(std::uint64_t index, const Raster& frame) = 0;
  virtual void end() {}
};

/// Encodes the stream into a TVC container.
class TvcSink final : public FrameSink {
 public:
  explicit TvcSink(EncoderParams params) : params_(params) {}

  void begin(const FrameType& type) override;
  void consume(std::uint64_t index, const Raster& frame) override;
  void end() override;

  /// Container bytes once `end` ran. A zero-frame stream yields an empty
  /// vector because TVC cannot hold zero frames.
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  EncoderParams params_;
  std::optional<TvcEncoder> encoder_;
  std::vector<std::uint8_t> bytes_;
};

class CollectSink final : public FrameSink {
 public:
  void consume(std::uint64_t, const Raster& frame) override { frames.push_back(frame); }
  std::vector<Raster> frames;
};

class CallbackSink final : public FrameSink {
 public:
  using Fn = std::function<void(std::uint64_t, const Raster&)>;
  explicit CallbackSink(Fn fn) : fn_(std::move(fn)) {}
  void consume(std::uint64_t index, const Raster& frame) override { fn_(index, frame); }

 private:
  Fn fn_;
};

}  // namespace reel
