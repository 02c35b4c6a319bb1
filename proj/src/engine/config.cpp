#include "reel/engine/config.hpp"

namespace reel {

void EngineConfig::validate() const {
  if (decode_workers == 0) throw std::invalid_argument("decode_workers must be >= 1");
  if (filter_workers == 0) throw std::invalid_argument("filter_workers must be >= 1");
  if (pool_capacity == 0) throw std::invalid_argument("pool_capacity must be >= 1");
  if (prefetch_window == 0) throw std::invalid_argument("prefetch_window must be >= 1");
}

}  // namespace reel
