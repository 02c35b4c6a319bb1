#include "reel/engine/sink.hpp"

namespace reel {

void TvcSink::begin(const FrameType& type) {
  encoder_.emplace(type, params_);
  bytes_.clear();
}

void TvcSink::consume(std::uint64_t, const Raster& frame) {
  if (!encoder_) encoder_.emplace(frame.type, params_);
  encoder_->push(frame);
}

void TvcSink::end() {
  if (encoder_ && encoder_->frames_pushed() > 0) bytes_ = encoder_->finish();
  encoder_.reset();
}

}  // namespace reel
