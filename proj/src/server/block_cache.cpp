#include "reel/server/block_cache.hpp"

#include <algorithm>
#include <cstring>

namespace reel::server {

BlockCache::BlockCache(std::uint64_t budget_bytes, std::size_t block_size)
    : budget_(budget_bytes), block_size_(block_size) {
  if (block_size_ == 0) throw std::invalid_argument("block size must be positive");
}

BlockCache::Block BlockCache::fetch(const FileReader& file, std::uint64_t index) {
  Key key{file.path(), index};
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++stats_.hits;
      lru_.splice(lru_.begin(), lru_, it->second.lru);
      return it->second.block;
    }
    ++stats_.misses;
    ++stats_.backend_reads;
  }
  const std::uint64_t begin = index * block_size_;
  const std::uint64_t len = std::min<std::uint64_t>(block_size_, file.size() - begin);
  auto data = std::make_shared<std::vector<std::uint8_t>>(len);
  file.read(begin, *data);
  Block block = std::move(data);

  std::lock_guard lock(mu_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second.block;
  if (block->size() > budget_) return block;  // too big to keep at all
  while (stats_.resident_bytes + block->size() > budget_ && !lru_.empty()) {
    auto victim = entries_.find(lru_.back());
    stats_.resident_bytes -= victim->second.block->size();
    entries_.erase(victim);
    lru_.pop_back();
    ++stats_.evictions;
  }
  lru_.push_front(key);
  entries_.emplace(std::move(key), Entry{block, lru_.begin()});
  stats_.resident_bytes += block->size();
  return block;
}

void BlockCache::read(const FileReader& file, std::uint64_t offset, std::span<std::uint8_t> out) {
  if (offset > file.size() || out.size() > file.size() - offset)
    throw CodecError("read of " + std::to_string(out.size()) + " bytes at offset " +
                     std::to_string(offset) + " past end of " + file.path());
  std::size_t done = 0;
  while (done < out.size()) {
    const std::uint64_t pos = offset + done;
    const std::uint64_t index = pos / block_size_;
    const Block block = fetch(file, index);
    const std::size_t within = static_cast<std::size_t>(pos - index * block_size_);
    const std::size_t n = std::min(out.size() - done, block->size() - within);
    std::memcpy(out.data() + done, block->data() + within, n);
    done += n;
  }
}

BlockCacheStats BlockCache::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

CachedReader::CachedReader(std::shared_ptr<BlockCache> cache, const std::string& path)
    : cache_(std::move(cache)), file_(path) {}

void CachedReader::read(std::uint64_t offset, std::span<std::uint8_t> out) const {
  cache_->read(file_, offset, out);
}

}  // namespace reel::server
