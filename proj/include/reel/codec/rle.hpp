#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace reel::rle {

// Payload is a sequence of (run_length, value) byte pairs, 1 <= run_length <= 255.
// The encoder always emits maximal runs.

std::vector<std::uint8_t> encode(std::span<const std::uint8_t> raw);
void encode_into(std::span<const std::uint8_t> raw, std::vector<std::uint8_t>& out);

/// Decodes into `out`, which must be exactly the expanded length. Returns
/// false on odd payload length, a zero run, or a length mismatch.
bool decode(std::span<const std::uint8_t> payload, std::span<std::uint8_t> out);

}  // namespace reel::rle
