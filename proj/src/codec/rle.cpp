#include "reel/codec/rle.hpp"

#include <algorithm>
#include <cstring>

namespace reel::rle {

void encode_into(std::span<const std::uint8_t> raw, std::vector<std::uint8_t>& out) {
  std::size_t i = 0;
  const std::size_t n = raw.size();
  while (i < n) {
    const std::uint8_t v = raw[i];
    std::size_t run = 1;
    while (run < 255 && i + run < n && raw[i + run] == v) ++run;
    out.push_back(static_cast<std::uint8_t>(run));
    out.push_back(v);
    i += run;
  }
}

std::vector<std::uint8_t> encode(std::span<const std::uint8_t> raw) {
  std::vector<std::uint8_t> out;
  out.reserve(raw.size() / 4 + 2);
  encode_into(raw, out);
  return out;
}

bool decode(std::span<const std::uint8_t> payload, std::span<std::uint8_t> out) {
  if (payload.size() % 2 != 0) return false;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < payload.size(); i += 2) {
    const std::size_t run = payload[i];
    if (run == 0 || pos + run > out.size()) return false;
    std::memset(out.data() + pos, payload[i + 1], run);
    pos += run;
  }
  return pos == out.size();
}

}  // namespace reel::rle
