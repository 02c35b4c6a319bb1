#include "reel/server/segment_cache.hpp"

namespace reel::server {

SegmentBytes SegmentCache::get_or_render(const Key& key, const std::function<SegmentBytes()>& render,
                                         const std::function<bool()>& keep) {
  std::shared_ptr<Flight> flight;
  {
    std::unique_lock lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++stats_.hits;
      lru_.splice(lru_.begin(), lru_, it->second.lru);
      return it->second.bytes;
    }
    ++stats_.misses;
    if (auto it = flights_.find(key); it != flights_.end()) {
      ++stats_.coalesced;
      auto mine = it->second;
      cv_.wait(lock, [&] { return mine->done; });
      if (mine->error) std::rethrow_exception(mine->error);
      return mine->bytes;
    }
    flight = std::make_shared<Flight>();
    flights_.emplace(key, flight);
    ++stats_.renders;
  }

  SegmentBytes bytes;
  std::exception_ptr error;
  try {
    bytes = render();
  } catch (...) {
    error = std::current_exception();
  }

  {
    std::lock_guard lock(mu_);
    flight->done = true;
    flight->bytes = bytes;
    flight->error = error;
    flights_.erase(key);
    if (!error && keep()) insert_locked(key, bytes);
  }
  cv_.notify_all();
  if (error) std::rethrow_exception(error);
  return bytes;
}

void SegmentCache::insert_locked(const Key& key, SegmentBytes bytes) {
  if (bytes->size() > budget_) return;
  while (stats_.resident_bytes + bytes->size() > budget_ && !lru_.empty()) {
    auto victim = entries_.find(lru_.back());
    stats_.resident_bytes -= victim->second.bytes->size();
    entries_.erase(victim);
    lru_.pop_back();
    ++stats_.evictions;
  }
  lru_.push_front(key);
  stats_.resident_bytes += bytes->size();
  entries_.emplace(key, Entry{std::move(bytes), lru_.begin()});
}

std::optional<SegmentBytes> SegmentCache::peek(const Key& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.bytes;
}

void SegmentCache::erase_spec(const std::string& spec_id) {
  std::lock_guard lock(mu_);
  auto it = entries_.lower_bound(Key{spec_id, 0});
  while (it != entries_.end() && it->first.spec_id == spec_id) {
    stats_.resident_bytes -= it->second.bytes->size();
    lru_.erase(it->second.lru);
    it = entries_.erase(it);
  }
}

SegmentCacheStats SegmentCache::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

}  // namespace reel::server
