#include "reel/codec/raster.hpp"

#include <stdexcept>
#include <utility>

namespace reel {

Raster::Raster(FrameType t) : type(t) {
  require_valid(t);
  data.assign(t.byte_size(), 0);
}

Raster::Raster(FrameType t, std::vector<std::uint8_t> bytes) : type(t), data(std::move(bytes)) {
  require_valid(t);
  if (data.size() != t.byte_size())
    throw std::invalid_argument("raster of " + t.to_string() + " needs " +
                                std::to_string(t.byte_size()) + " bytes, got " +
                                std::to_string(data.size()));
}

std::uint8_t* Raster::plane(int index) {
  return const_cast<std::uint8_t*>(std::as_const(*this).plane(index));
}

const std::uint8_t* Raster::plane(int index) const {
  if (type.pixfmt != PixelFormat::Yuv420p || index == 0) return data.data();
  const std::size_t luma = std::size_t{type.width} * type.height;
  const std::size_t chroma = std::size_t{type.width / 2} * (type.height / 2);
  return data.data() + luma + (index == 1 ? 0 : chroma);
}

}  // namespace reel
