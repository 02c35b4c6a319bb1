#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace reel::server {

using SegmentBytes = std::shared_ptr<const std::vector<std::uint8_t>>;

struct SegmentCacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t renders = 0;
  std::uint64_t coalesced = 0;
  std::uint64_t evictions = 0;
  std::uint64_t resident_bytes = 0;
};

/// LRU cache of encoded segments with a byte budget. Concurrent requests for
/// a missing segment share one render.
class SegmentCache {
 public:
  struct Key {
    std::string spec_id;
    std::uint64_t segment = 0;
    auto operator<=>(const Key&) const = default;
  };

  explicit SegmentCache(std::uint64_t budget_bytes) : budget_(budget_bytes) {}

  /// Returns the cached bytes or runs `render` (once, however many callers
  /// wait). The result is stored only if `keep()` is still true once the
  /// render finishes. Exceptions from `render` reach every waiting caller and
  /// nothing is cached.
  SegmentBytes get_or_render(const Key& key, const std::function<SegmentBytes()>& render,
                             const std::function<bool()>& keep = [] { return true; });

  std::optional<SegmentBytes> peek(const Key& key) const;
  void erase_spec(const std::string& spec_id);
  SegmentCacheStats stats() const;

 private:
  struct Flight {
    bool done = false;
    SegmentBytes bytes;
    std::exception_ptr error;
  };
  struct Entry {
    SegmentBytes bytes;
    std::list<Key>::iterator lru;
  };

  void insert_locked(const Key& key, SegmentBytes bytes);

  std::uint64_t budget_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<Key, Entry> entries_;
  std::list<Key> lru_;
  std::map<Key, std::shared_ptr<Flight>> flights_;
  SegmentCacheStats stats_;
};

}  // namespace reel::server
