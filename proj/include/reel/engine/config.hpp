#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace reel {

struct EngineConfig {
  std::uint32_t decode_workers = 1;
  std::uint32_t filter_workers = 1;
  /// Decoded frames held at once. Must cover the largest per-frame need set.
  std::size_t pool_capacity = 64;
  /// Maximum number of active generations.
  std::size_t prefetch_window = 32;
  /// Out-of-order results held before filter workers back off. 0 means
  /// "same as prefetch_window".
  std::size_t reorder_capacity = 0;
  /// Run the deterministic round-robin scheduler instead of threads. Always
  /// used when decode_workers == filter_workers == 1.
  bool simulate = false;
  /// Type-check every frame against the spec's output type before starting.
  bool check_types = true;
  /// Keep per-frame decode and evaluation logs in the stats.
  bool record_access = false;

  std::size_t effective_reorder_capacity() const {
    return reorder_capacity == 0 ? prefetch_window : reorder_capacity;
  }

  /// Throws std::invalid_argument on zero workers, window or pool.
  void validate() const;
};

/// A render failure tied to the output frame (absolute index) being produced.
class RenderError : public std::runtime_error {
 public:
  RenderError(std::uint64_t gen, const std::string& what)
      : std::runtime_error("gen " + std::to_string(gen) + ": " + what), gen_(gen), detail_(what) {}
  std::uint64_t gen() const { return gen_; }
  /// The message without the gen prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::uint64_t gen_;
  std::string detail_;
};

}  // namespace reel
