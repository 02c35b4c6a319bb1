#include "reel/engine/stats.hpp"

namespace reel {

nlohmann::json RenderStats::to_json() const {
  nlohmann::json j = {
      {"mode", mode},
      {"gens", gens},
      {"frames_decoded", frames_decoded},
      {"frames_evaluated", frames_evaluated},
      {"evictions", evictions},
      {"abandonments", abandonments},
      {"stalls", stalls},
      {"pool_inserts", pool_inserts},
      {"pool_drops", pool_drops},
      {"gop_assignments", gop_assignments},
      {"max_pool_size", max_pool_size},
      {"max_need_set", max_need_set},
      {"max_reorder", max_reorder},
      {"wall_ms", wall_ms},
      {"decoder_busy_ms", decoder_busy_ms},
      {"filter_busy_ms", filter_busy_ms},
  };
  if (!decode_log.empty()) {
    auto& log = j["decode_log"] = nlohmann::json::array();
    for (const auto& r : decode_log) log.push_back({r.source_id, r.frame_index});
  }
  if (!access_log.empty()) {
    auto& log = j["access_log"] = nlohmann::json::array();
    for (const auto& [g, r] : access_log) log.push_back({g, r.source_id, r.frame_index});
  }
  return j;
}

}  // namespace reel
