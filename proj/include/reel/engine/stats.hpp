#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "reel/ir/expr.hpp"

namespace reel {

struct RenderStats {
  std::string mode;  // "sim", "threaded" or "reference"
  std::uint64_t gens = 0;
  std::uint64_t frames_decoded = 0;
  std::uint64_t frames_evaluated = 0;
  std::uint64_t evictions = 0;
  std::uint64_t abandonments = 0;
  std::uint64_t stalls = 0;
  std::uint64_t pool_inserts = 0;
  std::uint64_t pool_drops = 0;
  std::uint64_t gop_assignments = 0;
  std::uint64_t max_pool_size = 0;
  std::uint64_t max_need_set = 0;
  std::uint64_t max_reorder = 0;
  double wall_ms = 0;
  std::vector<double> decoder_busy_ms;
  std::vector<double> filter_busy_ms;

  // Only filled with EngineConfig::record_access.
  std::vector<SourceRef> decode_log;
  std::vector<std::pair<std::uint64_t, SourceRef>> access_log;

  /// Counters and busy times; logs are included only when non-empty.
  nlohmann::json to_json() const;
};

}  // namespace reel
